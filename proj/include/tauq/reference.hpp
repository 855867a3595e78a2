#pragma once

#include <optional>
#include <vector>

#include "tauq/kernels.hpp"

namespace tauq {

/// Constant-coefficient problem: every pipeline stage has a closed form, so
/// these anchor the tolerances of the grid and Monte Carlo paths.
struct ConstantCoeffProblem {
    Mat A;
    Vec b;
    double c = 0.0;
    std::optional<LevySpec> levy;

    int dim() const { return static_cast<int>(A.rows()); }

    HamiltonSymbol symbol() const {
        const int d = dim();
        double a0 = A(0, 0), A0 = A(0, 0);
        if (d == 2) {
            const double tr = A.trace();
            const double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
            const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
            a0 = (tr - disc) / 2.0;
            A0 = (tr + disc) / 2.0;
        }
        return HamiltonSymbol(QuadraticSymbol(MatrixField::constant_field(d, A),
                                              VectorField::constant_field(d, b),
                                              ScalarField::constant_field(d, c), a0, A0),
                              levy);
    }
};

/// Unnormalized Gaussian amplitude * exp(-(q-center)' cov^{-1} (q-center)/2).
/// Closed under constant-coefficient evolution, which is the whole point.
struct GaussianComponent {
    double amplitude;
    Vec center;
    Mat cov;

    static GaussianComponent isotropic(const Vec& center, double s2, double amplitude = 1.0) {
        const int d = static_cast<int>(center.size());
        return {amplitude, center, (s2 * Mat::Identity(d, d)).eval()};
    }

    double operator()(const Vec& q) const {
        const Vec d = q - center;
        return amplitude * std::exp(-0.5 * d.dot(cov.llt().solve(d)));
    }
};

using GaussianMixture = std::vector<GaussianComponent>;

namespace detail {

inline GaussianComponent diffuse(const GaussianComponent& g, const ConstantCoeffProblem& prob,
                                 double t) {
    const Mat cov2 = g.cov + 2.0 * t * prob.A;
    const double amp = g.amplitude * std::exp(-t * prob.c) *
                       std::sqrt(g.cov.determinant() / cov2.determinant());
    return {amp, g.center + t * prob.b, cov2};
}

}  // namespace detail

/// Exact constant-coefficient evolution of a Gaussian mixture over time t.
/// The jump part expands each component into the truncated increment mixture;
/// the returned tail is the discarded Poisson mass times the amplitude scale.
inline GaussianMixture evolve_mixture(const GaussianMixture& in, const ConstantCoeffProblem& prob,
                                      double t, double* tail_out = nullptr, int depth = -1) {
    GaussianMixture out;
    double tail = 0.0;
    if (!prob.levy) {
        out.reserve(in.size());
        for (const auto& g : in) out.push_back(detail::diffuse(g, prob, t));
    } else {
        const LevyIncrementLaw law(prob.levy, t, depth);
        out.reserve(in.size() * law.atoms().size());
        for (const auto& g : in) {
            const GaussianComponent d = detail::diffuse(g, prob, t);
            tail += law.tail_bound() * std::abs(d.amplitude);
            for (const auto& a : law.atoms()) {
                GaussianComponent shifted = d;
                shifted.amplitude *= a.mass;
                shifted.center -= a.location;
                out.push_back(std::move(shifted));
            }
        }
    }
    if (tail_out) *tail_out = tail;
    return out;
}

inline double eval_mixture(const GaussianMixture& mix, const Vec& q) {
    double v = 0.0;
    for (const auto& g : mix) v += g(q);
    return v;
}

/// Closed-form solution for a pure diffusion problem (N absent) and Gaussian
/// datum: e^{-tc} sqrt(det s / det(s + 2tA)) exp(-(q0 - tb - m).(s+2tA)^{-1}(q0 - tb - m)/2).
inline double exact_gaussian_solution(const ConstantCoeffProblem& prob, double t, const Vec& q0,
                                      const GaussianComponent& datum) {
    if (prob.levy) throw std::invalid_argument("exact_gaussian_solution: jump part present");
    if (t == 0.0) return datum(q0);
    return detail::diffuse(datum, prob, t)(q0);
}

struct JumpSolution {
    double value;
    double tail_bound;
};

/// Poisson-series oracle: finite mixture of jump-shifted Gaussian solutions.
inline JumpSolution exact_jump_solution(const ConstantCoeffProblem& prob, double t, const Vec& q0,
                                        const GaussianComponent& datum, int depth = -1) {
    if (t == 0.0) return {datum(q0), 0.0};
    double tail = 0.0;
    const GaussianMixture mix = evolve_mixture({datum}, prob, t, &tail, depth);
    return {eval_mixture(mix, q0), tail};
}

}  // namespace tauq
