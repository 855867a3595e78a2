#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tauq/common.hpp"

namespace tauq {

namespace detail {

/// Probe points used for construction-time consistency spot checks.
inline std::vector<Vec> probe_points(int dim) {
    static const double coords[] = {0.0, 0.7, -0.7, 1.3, -1.3, 2.9, -2.9};
    std::vector<Vec> pts;
    if (dim == 1) {
        for (double x : coords) pts.push_back(vec1(x));
    } else {
        for (double x : coords)
            for (double y : {0.0, 0.9, -1.7}) pts.push_back(vec2(x, y));
    }
    return pts;
}

inline double fd_step(const Vec& q, double scale) { return scale * (1.0 + q.norm()); }

}  // namespace detail

/// Scalar coefficient field c(q) with optional analytic derivatives; central
/// finite differences fill in whatever is missing. Evaluations are pure.
class ScalarField {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradFn = std::function<Vec(const Vec&)>;
    using HessFn = std::function<Mat(const Vec&)>;

    ScalarField(int dim, ValueFn value, GradFn grad = nullptr, HessFn hess = nullptr,
                bool constant = false, double fd_scale = 1e-5)
        : dim_(dim), value_(std::move(value)), grad_(std::move(grad)), hess_(std::move(hess)),
          constant_(constant), fd_scale_(fd_scale) {
        validate();
    }

    static ScalarField constant_field(int dim, double v) {
        return ScalarField(
            dim, [v](const Vec&) { return v; }, [dim](const Vec&) { return Vec::Zero(dim).eval(); },
            [dim](const Vec&) { return Mat::Zero(dim, dim).eval(); }, true);
    }

    int dim() const { return dim_; }
    bool is_constant() const { return constant_; }

    double operator()(const Vec& q) const { return value_(q); }

    Vec grad(const Vec& q) const {
        if (grad_) return grad_(q);
        return fd_grad(q);
    }

    Mat hess(const Vec& q) const {
        if (hess_) return hess_(q);
        return fd_hess(q);
    }

private:
    void validate() const {
        if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("ScalarField: dim must be 1 or 2");
        if (!value_) throw std::invalid_argument("ScalarField: missing value map");
        for (const Vec& q : detail::probe_points(dim_)) {
            const double ref = std::max(1.0, std::abs(value_(q)));
            if (grad_ && (grad_(q) - fd_grad(q)).norm() > 1e-6 * ref * 10)
                throw std::invalid_argument("ScalarField: analytic gradient disagrees with finite differences");
            if (hess_ && (hess_(q) - fd_hess(q)).norm() > 1e-4 * ref * 10)
                throw std::invalid_argument("ScalarField: analytic hessian disagrees with finite differences");
        }
    }

    Vec fd_grad(const Vec& q) const {
        const double h = detail::fd_step(q, fd_scale_);
        Vec g(dim_);
        for (int k = 0; k < dim_; ++k) {
            Vec qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            g[k] = (value_(qp) - value_(qm)) / (2 * h);
        }
        return g;
    }

    Mat fd_hess(const Vec& q) const {
        const double h = detail::fd_step(q, std::sqrt(fd_scale_));
        Mat H(dim_, dim_);
        const double f0 = value_(q);
        for (int j = 0; j < dim_; ++j) {
            for (int k = j; k < dim_; ++k) {
                if (j == k) {
                    Vec qp = q, qm = q;
                    qp[j] += h;
                    qm[j] -= h;
                    H(j, j) = (value_(qp) - 2 * f0 + value_(qm)) / (h * h);
                } else {
                    Vec qpp = q, qpm = q, qmp = q, qmm = q;
                    qpp[j] += h; qpp[k] += h;
                    qpm[j] += h; qpm[k] -= h;
                    qmp[j] -= h; qmp[k] += h;
                    qmm[j] -= h; qmm[k] -= h;
                    H(j, k) = H(k, j) =
                        (value_(qpp) - value_(qpm) - value_(qmp) + value_(qmm)) / (4 * h * h);
                }
            }
        }
        return H;
    }

    int dim_;
    ValueFn value_;
    GradFn grad_;
    HessFn hess_;
    bool constant_;
    double fd_scale_;
};

/// Vector coefficient field b(q); the generator needs its values and Div b.
class VectorField {
public:
    using ValueFn = std::function<Vec(const Vec&)>;
    using JacFn = std::function<Mat(const Vec&)>;

    VectorField(int dim, ValueFn value, JacFn jacobian = nullptr, bool constant = false,
                double fd_scale = 1e-5)
        : dim_(dim), value_(std::move(value)), jac_(std::move(jacobian)), constant_(constant),
          fd_scale_(fd_scale) {
        validate();
    }

    static VectorField zero(int dim) {
        return VectorField(
            dim, [dim](const Vec&) { return Vec::Zero(dim).eval(); },
            [dim](const Vec&) { return Mat::Zero(dim, dim).eval(); }, true);
    }

    static VectorField constant_field(int dim, Vec v) {
        return VectorField(
            dim, [v](const Vec&) { return v; },
            [dim](const Vec&) { return Mat::Zero(dim, dim).eval(); }, true);
    }

    int dim() const { return dim_; }
    bool is_constant() const { return constant_; }

    Vec operator()(const Vec& q) const { return value_(q); }

    /// Jacobian matrix J_{jk} = d b_j / d q_k.
    Mat jacobian(const Vec& q) const {
        if (jac_) return jac_(q);
        return fd_jacobian(q);
    }

    double divergence(const Vec& q) const { return jacobian(q).trace(); }

private:
    void validate() const {
        if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("VectorField: dim must be 1 or 2");
        if (!value_) throw std::invalid_argument("VectorField: missing value map");
        for (const Vec& q : detail::probe_points(dim_)) {
            if ((int)value_(q).size() != dim_)
                throw std::invalid_argument("VectorField: value has wrong dimension");
            if (jac_ && (jac_(q) - fd_jacobian(q)).norm() > 1e-5)
                throw std::invalid_argument("VectorField: analytic jacobian disagrees with finite differences");
        }
    }

    Mat fd_jacobian(const Vec& q) const {
        const double h = detail::fd_step(q, fd_scale_);
        Mat J(dim_, dim_);
        for (int k = 0; k < dim_; ++k) {
            Vec qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            J.col(k) = (value_(qp) - value_(qm)) / (2 * h);
        }
        return J;
    }

    int dim_;
    ValueFn value_;
    JacFn jac_;
    bool constant_;
    double fd_scale_;
};

/// Symmetric matrix coefficient field A(q). Besides values, the generator
/// and the quantization transform need Div A (the vector with components
/// sum_k d_k A_{jk}) and the full second-derivative trace sum_{jk} d_j d_k A_{jk}.
class MatrixField {
public:
    using ValueFn = std::function<Mat(const Vec&)>;
    using DivFn = std::function<Vec(const Vec&)>;
    using HessTraceFn = std::function<double(const Vec&)>;

    MatrixField(int dim, ValueFn value, DivFn div = nullptr, HessTraceFn hess_trace = nullptr,
                bool constant = false, double fd_scale = 1e-5)
        : dim_(dim), value_(std::move(value)), div_(std::move(div)),
          hess_trace_(std::move(hess_trace)), constant_(constant), fd_scale_(fd_scale) {
        validate();
    }

    static MatrixField constant_field(int dim, Mat A) {
        return MatrixField(
            dim, [A](const Vec&) { return A; }, [dim](const Vec&) { return Vec::Zero(dim).eval(); },
            [](const Vec&) { return 0.0; }, true);
    }

    static MatrixField identity(int dim, double scale = 1.0) {
        return constant_field(dim, (scale * Mat::Identity(dim, dim)).eval());
    }

    int dim() const { return dim_; }
    bool is_constant() const { return constant_; }

    Mat operator()(const Vec& q) const { return value_(q); }

    Vec divergence(const Vec& q) const {
        if (div_) return div_(q);
        return fd_divergence(q);
    }

    double hess_trace(const Vec& q) const {
        if (hess_trace_) return hess_trace_(q);
        return fd_hess_trace(q);
    }

private:
    void validate() const {
        if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("MatrixField: dim must be 1 or 2");
        if (!value_) throw std::invalid_argument("MatrixField: missing value map");
        for (const Vec& q : detail::probe_points(dim_)) {
            const Mat A = value_(q);
            if (A.rows() != dim_ || A.cols() != dim_)
                throw std::invalid_argument("MatrixField: value has wrong shape");
            if ((A - A.transpose()).norm() > 1e-12)
                throw std::invalid_argument("MatrixField: value not symmetric");
            if (div_ && (div_(q) - fd_divergence(q)).norm() > 1e-5)
                throw std::invalid_argument("MatrixField: analytic divergence disagrees with finite differences");
            if (hess_trace_ && std::abs(hess_trace_(q) - fd_hess_trace(q)) > 1e-3)
                throw std::invalid_argument("MatrixField: analytic hessian trace disagrees with finite differences");
        }
    }

    Vec fd_divergence(const Vec& q) const {
        const double h = detail::fd_step(q, fd_scale_);
        Vec d = Vec::Zero(dim_);
        for (int k = 0; k < dim_; ++k) {
            Vec qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            const Mat dk = (value_(qp) - value_(qm)) / (2 * h);
            d += dk.col(k);
        }
        return d;
    }

    double fd_hess_trace(const Vec& q) const {
        const double h = detail::fd_step(q, std::sqrt(fd_scale_));
        double s = 0.0;
        const Mat A0 = value_(q);
        for (int j = 0; j < dim_; ++j) {
            for (int k = 0; k < dim_; ++k) {
                if (j == k) {
                    Vec qp = q, qm = q;
                    qp[j] += h;
                    qm[j] -= h;
                    s += (value_(qp)(j, j) - 2 * A0(j, j) + value_(qm)(j, j)) / (h * h);
                } else {
                    Vec qpp = q, qpm = q, qmp = q, qmm = q;
                    qpp[j] += h; qpp[k] += h;
                    qpm[j] += h; qpm[k] -= h;
                    qmp[j] -= h; qmp[k] += h;
                    qmm[j] -= h; qmm[k] -= h;
                    s += (value_(qpp)(j, k) - value_(qpm)(j, k) - value_(qmp)(j, k) +
                          value_(qmm)(j, k)) /
                         (4 * h * h);
                }
            }
        }
        return s;
    }

    int dim_;
    ValueFn value_;
    DivFn div_;
    HessTraceFn hess_trace_;
    bool constant_;
    double fd_scale_;
};

}  // namespace tauq
