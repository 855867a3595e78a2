#pragma once

#include <functional>
#include <vector>

#include "tauq/common.hpp"

namespace tauq {

/// Uniform truncated lattice on a box, d in {1,2}, M points per axis.
/// Values live at the lattice points; quadrature is the trapezoid rule.
class GridSpec {
public:
    GridSpec(int dim, Vec lo, Vec hi, int points_per_axis)
        : dim_(dim), lo_(std::move(lo)), hi_(std::move(hi)), m_(points_per_axis) {
        if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("GridSpec: dim must be 1 or 2");
        if ((int)lo_.size() != dim_ || (int)hi_.size() != dim_)
            throw std::invalid_argument("GridSpec: bounds dimension mismatch");
        if (m_ < 16) throw std::invalid_argument("GridSpec: need at least 16 points per axis");
        h_.resize(dim_);
        for (int ax = 0; ax < dim_; ++ax) {
            if (!(hi_[ax] > lo_[ax])) throw std::invalid_argument("GridSpec: empty axis range");
            h_[ax] = (hi_[ax] - lo_[ax]) / (m_ - 1);
        }
    }

    static GridSpec line(double lo, double hi, int points) {
        return GridSpec(1, vec1(lo), vec1(hi), points);
    }

    int dim() const { return dim_; }
    int points_per_axis() const { return m_; }
    std::size_t size() const {
        std::size_t s = static_cast<std::size_t>(m_);
        return dim_ == 1 ? s : s * s;
    }
    const Vec& lo() const { return lo_; }
    const Vec& hi() const { return hi_; }
    double spacing(int ax = 0) const { return h_[ax]; }

    /// Product of spacings: the cell volume h^d.
    double cell_volume() const {
        double v = 1.0;
        for (int ax = 0; ax < dim_; ++ax) v *= h_[ax];
        return v;
    }

    Vec point(std::size_t flat) const {
        Vec q(dim_);
        if (dim_ == 1) {
            q[0] = lo_[0] + h_[0] * static_cast<double>(flat);
        } else {
            q[0] = lo_[0] + h_[0] * static_cast<double>(flat / m_);
            q[1] = lo_[1] + h_[1] * static_cast<double>(flat % m_);
        }
        return q;
    }

    /// Trapezoid weight (1/2 on boundary points per axis, product over axes).
    double weight(std::size_t flat) const {
        auto axis_w = [this](long i) { return (i == 0 || i == m_ - 1) ? 0.5 : 1.0; };
        if (dim_ == 1) return axis_w(static_cast<long>(flat));
        return axis_w(static_cast<long>(flat / m_)) * axis_w(static_cast<long>(flat % m_));
    }

    bool operator==(const GridSpec& o) const {
        return dim_ == o.dim_ && m_ == o.m_ && lo_ == o.lo_ && hi_ == o.hi_;
    }

private:
    int dim_;
    Vec lo_, hi_;
    int m_;
    Vec h_;
};

/// Sampled function on a GridSpec lattice. Arithmetic is elementwise.
template <typename Scalar>
class GridFunction {
public:
    using Storage = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

    explicit GridFunction(GridSpec spec)
        : spec_(std::move(spec)), values_(Storage::Zero(static_cast<long>(spec_.size()))) {}

    GridFunction(GridSpec spec, Storage values) : spec_(std::move(spec)), values_(std::move(values)) {
        if (static_cast<std::size_t>(values_.size()) != spec_.size())
            throw std::invalid_argument("GridFunction: value count does not match grid");
    }

    static GridFunction sample(const GridSpec& spec, const std::function<Scalar(const Vec&)>& fn) {
        GridFunction g(spec);
        for (std::size_t i = 0; i < spec.size(); ++i) g.values_[static_cast<long>(i)] = fn(spec.point(i));
        return g;
    }

    const GridSpec& spec() const { return spec_; }
    Storage& values() { return values_; }
    const Storage& values() const { return values_; }
    Scalar operator[](std::size_t i) const { return values_[static_cast<long>(i)]; }
    Scalar& operator[](std::size_t i) { return values_[static_cast<long>(i)]; }

    /// h^d sum of |values|.
    double l1_norm() const { return spec_.cell_volume() * values_.abs().sum(); }

    double max_abs() const { return values_.abs().maxCoeff(); }

    /// Linear interpolation (d = 1) / bilinear (d = 2); zero outside the box.
    Scalar interp(const Vec& q) const {
        if (static_cast<int>(q.size()) != spec_.dim())
            throw std::invalid_argument("GridFunction::interp: point dimension mismatch");
        const int m = spec_.points_per_axis();
        auto locate = [&](int ax, double x, long& i0, double& frac) -> bool {
            const double s = (x - spec_.lo()[ax]) / spec_.spacing(ax);
            if (s < 0.0 || s > m - 1) return false;
            i0 = std::min<long>(static_cast<long>(s), m - 2);
            frac = s - static_cast<double>(i0);
            return true;
        };
        if (spec_.dim() == 1) {
            long i0 = 0;
            double f = 0;
            if (!locate(0, q[0], i0, f)) return Scalar(0);
            return values_[i0] * (1 - f) + values_[i0 + 1] * f;
        }
        long i0 = 0, j0 = 0;
        double fx = 0, fy = 0;
        if (!locate(0, q[0], i0, fx) || !locate(1, q[1], j0, fy)) return Scalar(0);
        auto at = [&](long i, long j) { return values_[i * m + j]; };
        return at(i0, j0) * (1 - fx) * (1 - fy) + at(i0 + 1, j0) * fx * (1 - fy) +
               at(i0, j0 + 1) * (1 - fx) * fy + at(i0 + 1, j0 + 1) * fx * fy;
    }

    GridFunction& operator+=(const GridFunction& o) { values_ += o.values_; return *this; }
    GridFunction& operator-=(const GridFunction& o) { values_ -= o.values_; return *this; }
    GridFunction& operator*=(Scalar s) { values_ *= s; return *this; }

    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator*(Scalar s, GridFunction a) { return a *= s; }

private:
    GridSpec spec_;
    Storage values_;
};

using RealGridFunction = GridFunction<double>;
using ComplexGridFunction = GridFunction<Cplx>;

inline double l1_distance(const RealGridFunction& a, const RealGridFunction& b) {
    return (a - b).l1_norm();
}

}  // namespace tauq
