#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "tauq/fields.hpp"

namespace tauq {

/// Quadratic-in-momentum part of the Hamilton function:
/// h(q,p) = c(q) + i b(q).p + p.A(q)p, with declared ellipticity bounds
/// a0 |p|^2 <= p.A(q)p <= A0 |p|^2 spot-checked on a probe set.
struct QuadraticSymbol {
    MatrixField A;
    VectorField b;
    ScalarField c;
    double a0;
    double A0;

    QuadraticSymbol(MatrixField A_, VectorField b_, ScalarField c_, double a0_, double A0_)
        : A(std::move(A_)), b(std::move(b_)), c(std::move(c_)), a0(a0_), A0(A0_) {
        if (A.dim() != b.dim() || A.dim() != c.dim())
            throw std::invalid_argument("QuadraticSymbol: mismatched dimensions");
        if (!(a0 > 0.0) || !(A0 >= a0))
            throw std::invalid_argument("QuadraticSymbol: need 0 < a0 <= A0");
        check_ellipticity();
    }

    int dim() const { return A.dim(); }
    bool is_constant() const { return A.is_constant() && b.is_constant() && c.is_constant(); }

private:
    void check_ellipticity() const {
        std::vector<Vec> dirs;
        if (dim() == 1) {
            dirs.push_back(vec1(1.0));
        } else {
            dirs.push_back(vec2(1.0, 0.0));
            dirs.push_back(vec2(0.0, 1.0));
            dirs.push_back(vec2(M_SQRT1_2, M_SQRT1_2));
            dirs.push_back(vec2(M_SQRT1_2, -M_SQRT1_2));
        }
        for (const Vec& q : detail::probe_points(dim())) {
            const Mat Aq = A(q);
            for (const Vec& e : dirs) {
                const double quad = e.dot(Aq * e);
                if (quad < a0 * (1 - 1e-9) || quad > A0 * (1 + 1e-9))
                    throw std::invalid_argument("QuadraticSymbol: ellipticity bounds violated on probe set");
            }
        }
    }
};

struct LevyAtom {
    Vec y;
    double w;
};

/// Finite-activity jump measure given by weighted atoms. Carries the derived
/// total rate, the categorical jump law and the compensator drift
/// gamma = sum_j w_j y_j / (1 + |y_j|^2).
class LevySpec {
public:
    LevySpec(int dim, std::vector<LevyAtom> atoms) : dim_(dim), atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("LevySpec: no atoms (omit the measure instead)");
        gamma_ = Vec::Zero(dim_);
        rate_ = 0.0;
        for (const auto& a : atoms_) {
            if ((int)a.y.size() != dim_) throw std::invalid_argument("LevySpec: atom dimension mismatch");
            if (a.y.norm() == 0.0) throw std::invalid_argument("LevySpec: atom at the origin");
            if (!(a.w > 0.0)) throw std::invalid_argument("LevySpec: nonpositive weight");
            rate_ += a.w;
            gamma_ += a.w * a.y / (1.0 + a.y.squaredNorm());
        }
        jump_cdf_.reserve(atoms_.size());
        double acc = 0.0;
        for (const auto& a : atoms_) {
            acc += a.w / rate_;
            jump_cdf_.push_back(acc);
        }
        jump_cdf_.back() = 1.0;
    }

    int dim() const { return dim_; }
    const std::vector<LevyAtom>& atoms() const { return atoms_; }
    double rate() const { return rate_; }
    const Vec& compensator_drift() const { return gamma_; }
    const std::vector<double>& jump_cdf() const { return jump_cdf_; }

    /// Recomputes gamma from the atoms; the stored value is this exact sum.
    Vec recompute_compensator_drift() const {
        Vec g = Vec::Zero(dim_);
        for (const auto& a : atoms_) g += a.w * a.y / (1.0 + a.y.squaredNorm());
        return g;
    }

    /// Largest atom displacement, used for kernel support estimates.
    double max_jump() const {
        double m = 0.0;
        for (const auto& a : atoms_) m = std::max(m, a.y.norm());
        return m;
    }

private:
    int dim_;
    std::vector<LevyAtom> atoms_;
    double rate_;
    Vec gamma_;
    std::vector<double> jump_cdf_;
};

/// Levy-Khintchine exponent r(p) = sum_j w_j (1 - e^{i y_j.p} + i y_j.p/(1+|y_j|^2)).
/// Its real part is nonnegative for every p.
inline Cplx levy_exponent(const LevySpec& levy, const Vec& p) {
    Cplx r{0.0, 0.0};
    for (const auto& a : levy.atoms()) {
        const double phase = a.y.dot(p);
        r += a.w * (Cplx{1.0, 0.0} - std::polar(1.0, phase) +
                    Cplx{0.0, phase / (1.0 + a.y.squaredNorm())});
    }
    return r;
}

/// Full Hamilton function H(q,p) = h(q,p) + r(p).
struct HamiltonSymbol {
    QuadraticSymbol quad;
    std::optional<LevySpec> levy;

    HamiltonSymbol(QuadraticSymbol quad_, std::optional<LevySpec> levy_ = std::nullopt)
        : quad(std::move(quad_)), levy(std::move(levy_)) {
        if (levy && levy->dim() != quad.dim())
            throw std::invalid_argument("HamiltonSymbol: jump measure dimension mismatch");
    }

    int dim() const { return quad.dim(); }
    bool is_constant_coeff() const { return quad.is_constant(); }
};

inline Cplx eval_symbol(const HamiltonSymbol& H, const Vec& q, const Vec& p) {
    Cplx v{H.quad.c(q) + p.dot(H.quad.A(q) * p), H.quad.b(q).dot(p)};
    if (H.levy) v += levy_exponent(*H.levy, p);
    return v;
}

/// Rewrites a tau-quantized symbol as the equivalent qp-quantized (tau = 1)
/// one: A and the jump part are unchanged while
///   b_tau(q) = b(q) - 2(1-tau) Div A(q),
///   c_tau(q) = c(q) + (1-tau) Div b(q) - (1-tau)^2 tr(Hess A(q)).
/// Derivatives of the rewritten fields fall back to finite differences.
inline HamiltonSymbol tau_transform(const HamiltonSymbol& H, double tau) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("tau_transform: tau outside [0,1]");
    const double u = 1.0 - tau;
    const int d = H.dim();
    const MatrixField A = H.quad.A;
    const VectorField b = H.quad.b;
    const ScalarField c = H.quad.c;

    VectorField b_tau(
        d,
        [A, b, u, d](const Vec& q) -> Vec {
            if (u == 0.0) return b(q);
            return b(q) - 2.0 * u * A.divergence(q);
        },
        nullptr, A.is_constant() && b.is_constant());

    ScalarField c_tau(
        d,
        [A, b, c, u](const Vec& q) -> double {
            if (u == 0.0) return c(q);
            return c(q) + u * b.divergence(q) - u * u * A.hess_trace(q);
        },
        nullptr, nullptr, H.quad.is_constant());

    return HamiltonSymbol(QuadraticSymbol(A, std::move(b_tau), std::move(c_tau), H.quad.a0, H.quad.A0),
                          H.levy);
}

/// Named coefficient presets (d = 1), all with analytic derivatives.
///   constant    A = 1,          b = 0,          c = 0
///   sin-mass    A = 2 + sin q,  b = 0,          c = 0
///   bump-drift  A = 1,          b = exp(-q^2),  c = 0
///   well        A = 1,          b = 0,          c = q^2/(1+q^2)
inline HamiltonSymbol make_preset(const std::string& name,
                                  std::optional<LevySpec> levy = std::nullopt) {
    const int d = 1;
    if (name == "constant") {
        return HamiltonSymbol(QuadraticSymbol(MatrixField::identity(d), VectorField::zero(d),
                                              ScalarField::constant_field(d, 0.0), 1.0, 1.0),
                              std::move(levy));
    }
    if (name == "sin-mass") {
        MatrixField A(
            d, [](const Vec& q) { return mat1(2.0 + std::sin(q[0])); },
            [](const Vec& q) { return vec1(std::cos(q[0])); },
            [](const Vec& q) { return -std::sin(q[0]); });
        return HamiltonSymbol(QuadraticSymbol(std::move(A), VectorField::zero(d),
                                              ScalarField::constant_field(d, 0.0), 1.0, 3.0),
                              std::move(levy));
    }
    if (name == "bump-drift") {
        VectorField b(
            d, [](const Vec& q) { return vec1(std::exp(-q[0] * q[0])); },
            [](const Vec& q) { return mat1(-2.0 * q[0] * std::exp(-q[0] * q[0])); });
        return HamiltonSymbol(QuadraticSymbol(MatrixField::identity(d), std::move(b),
                                              ScalarField::constant_field(d, 0.0), 1.0, 1.0),
                              std::move(levy));
    }
    if (name == "well") {
        ScalarField c(
            d, [](const Vec& q) { return q[0] * q[0] / (1.0 + q[0] * q[0]); },
            [](const Vec& q) {
                const double s = 1.0 + q[0] * q[0];
                return vec1(2.0 * q[0] / (s * s));
            },
            [](const Vec& q) {
                const double x = q[0];
                const double s = 1.0 + x * x;
                return mat1((2.0 - 6.0 * x * x) / (s * s * s));
            });
        return HamiltonSymbol(QuadraticSymbol(MatrixField::identity(d), VectorField::zero(d),
                                              std::move(c), 1.0, 1.0),
                              std::move(levy));
    }
    throw ConfigError("unknown preset: " + name);
}

/// Constant-coefficient symbol helper used by oracles and tests.
inline HamiltonSymbol make_constant_symbol(double A, double b, double c,
                                           std::optional<LevySpec> levy = std::nullopt) {
    return HamiltonSymbol(QuadraticSymbol(MatrixField::identity(1, A),
                                          VectorField::constant_field(1, vec1(b)),
                                          ScalarField::constant_field(1, c), A, A),
                          std::move(levy));
}

}  // namespace tauq
