#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "tauq/rng.hpp"
#include "tauq/symbols.hpp"

namespace tauq {

/// Frozen Gaussian kernel data at a single coefficient point x:
/// g^x_t(z) = (4 pi t)^{-d/2} det(A(x))^{-1/2} e^{-t c(x)}
///            exp(-(z - t b(x)) . A^{-1}(x) (z - t b(x)) / (4t)).
struct GaussParams {
    Mat A_inv;
    Vec mean;       // t b(x)
    double norm;    // (4 pi t)^{-d/2} det(A)^{-1/2} e^{-t c}
    double inv4t;   // 1/(4t)

    double operator()(const Vec& z) const {
        const Vec d = z - mean;
        const double expo = -d.dot(A_inv * d) * inv4t;
        if (expo < -700.0) return 0.0;
        return norm * std::exp(expo);
    }

    /// Allocation-free d = 1 evaluation for the grid inner loops.
    double eval1(double z) const {
        const double d = z - mean[0];
        const double expo = -d * d * A_inv(0, 0) * inv4t;
        if (expo < -700.0) return 0.0;
        return norm * std::exp(expo);
    }
};

namespace detail {

/// Determinant/inverse with a conditioning guard; failure signals a symbol
/// that lost ellipticity at this point.
inline void invert_spd(const Mat& A, Mat& inv, double& det) {
    const int d = static_cast<int>(A.rows());
    if (d == 1) {
        const double a = A(0, 0);
        if (!(a > 1e-10) || !std::isfinite(a))
            throw NumericalGuard("diffusion matrix not positive definite");
        det = a;
        inv = mat1(1.0 / a);
        return;
    }
    const double tr = A.trace();
    det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double lmin = (tr - disc) / 2.0, lmax = (tr + disc) / 2.0;
    if (!(lmin > 1e-10) || lmax / lmin > 1e12)
        throw NumericalGuard("diffusion matrix singular or ill-conditioned");
    inv.resize(2, 2);
    inv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
    inv /= det;
}

}  // namespace detail

inline GaussParams gaussian_params(const HamiltonSymbol& H, const Vec& x, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_kernel: t must be positive");
    const int d = H.dim();
    GaussParams g;
    double det = 0.0;
    detail::invert_spd(H.quad.A(x), g.A_inv, det);
    g.mean = t * H.quad.b(x);
    g.norm = std::pow(4.0 * M_PI * t, -0.5 * d) / std::sqrt(det) * std::exp(-t * H.quad.c(x));
    g.inv4t = 1.0 / (4.0 * t);
    return g;
}

/// Closed-form transition kernel of the quadratic part; integrates in z to
/// exactly e^{-t c(x)}.
inline double gaussian_kernel(const HamiltonSymbol& H, const Vec& x, double t, const Vec& z) {
    return gaussian_params(H, x, t)(z);
}

/// One atom of the discrete time-t jump increment law.
struct IncrementAtom {
    Vec location;
    double mass;
};

/// Law of the time-t increment of the finite-activity Levy process with
/// exponent r: a compound Poisson sum of jump atoms shifted by -t gamma.
/// The characteristic function of samples is e^{-t r(p)}.
class LevyIncrementLaw {
public:
    LevyIncrementLaw(std::optional<LevySpec> spec, double t, int series_depth = -1,
                     int dim_if_absent = 1)
        : spec_(std::move(spec)), t_(t), dim_(spec_ ? spec_->dim() : dim_if_absent) {
        if (!(t > 0.0)) throw std::invalid_argument("LevyIncrementLaw: t must be positive");
        const double lt = spec_ ? spec_->rate() * t_ : 0.0;
        depth_ = series_depth >= 0 ? series_depth
                                   : static_cast<int>(std::ceil(lt + 8.0 * std::sqrt(lt) + 8.0));
        build();
    }

    double t() const { return t_; }
    int series_depth() const { return depth_; }
    const std::vector<IncrementAtom>& atoms() const { return atoms_; }

    /// Poisson mass beyond the truncation depth; total atom mass is
    /// 1 - tail_bound().
    double tail_bound() const { return tail_; }

    double covered_mass() const { return covered_; }

    /// Largest |location| in the truncated decomposition.
    double reach() const {
        double m = 0.0;
        for (const auto& a : atoms_) m = std::max(m, a.location.norm());
        return m;
    }

    /// Exact draw: K ~ Poisson(rate * t) jumps from the jump law, shifted by
    /// -t gamma. For an absent measure this is identically zero.
    Vec sample(RngStream& rng) const {
        if (!spec_) return Vec::Zero(dim_);
        Vec x = -t_ * spec_->compensator_drift();
        const int k = rng.poisson(spec_->rate() * t_);
        for (int i = 0; i < k; ++i) {
            const int j = rng.categorical(spec_->jump_cdf());
            x += spec_->atoms()[static_cast<std::size_t>(j)].y;
        }
        return x;
    }

    int dim() const { return dim_; }

private:
    void build() {
        if (!spec_) {
            atoms_.push_back({Vec::Zero(dim_), 1.0});
            tail_ = 0.0;
            covered_ = 1.0;
            return;
        }
        const auto& ja = spec_->atoms();
        const int n_types = static_cast<int>(ja.size());
        const Vec shift = (-t_ * spec_->compensator_drift()).eval();
        const double base = std::exp(-spec_->rate() * t_);
        covered_ = 0.0;
        // Enumerate jump-count multi-indices (k_1,...,k_J) with sum <= depth;
        // mass = e^{-rate t} prod (t w_j)^{k_j} / k_j!.
        enumerate(0, n_types, depth_, base, shift);
        // Poisson tail of the total count beyond depth.
        double cdf = 0.0, term = base;
        const double lt = spec_->rate() * t_;
        for (int k = 0; k <= depth_; ++k) {
            cdf += term;
            term *= lt / (k + 1);
        }
        tail_ = std::max(0.0, 1.0 - cdf);
    }

    void enumerate(int type, int n_types, int budget, double mass, Vec loc) {
        if (type == n_types) {
            atoms_.push_back({loc, mass});
            covered_ += mass;
            return;
        }
        const auto& a = spec_->atoms()[static_cast<std::size_t>(type)];
        double m = mass;
        Vec l = loc;
        for (int k = 0; k <= budget; ++k) {
            if (k > 0) {
                m *= t_ * a.w / k;
                l += a.y;
            }
            enumerate(type + 1, n_types, budget - k, m, l);
        }
    }

    std::optional<LevySpec> spec_;
    double t_;
    int dim_;
    int depth_;
    double tail_ = 0.0;
    double covered_ = 0.0;
    std::vector<IncrementAtom> atoms_;
};

/// Truncated atomic decomposition of the increment law (locations and
/// masses); the locations are k-fold jump sums shifted by -t gamma.
inline std::vector<IncrementAtom> levy_density(const LevyIncrementLaw& law) {
    return law.atoms();
}

inline Vec levy_increment_sample(const LevyIncrementLaw& law, RngStream& rng) {
    return law.sample(rng);
}

/// One-step kernel of the Lagrangian family: the inverse Fourier transform
/// of e^{-t H(m, .)} at z = q - q1 with midpoint m = tau q + (1-tau) q1.
/// For the atomic jump law this is the exact mixture
///   sum_m mass_m * g^m_t(z + location_m),
/// which collapses to the Gaussian kernel when no jumps are present.
class OneStepKernel {
public:
    OneStepKernel(const HamiltonSymbol& H, double tau, double t)
        : H_(&H), tau_(tau), t_(t), law_(H.levy, t, -1, H.dim()) {
        if (!(t > 0.0)) throw std::invalid_argument("one_step_kernel: t must be positive");
        if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("one_step_kernel: tau outside [0,1]");
    }

    const LevyIncrementLaw& increment_law() const { return law_; }
    double t() const { return t_; }
    double tau() const { return tau_; }

    Vec midpoint(const Vec& q, const Vec& q1) const { return tau_ * q + (1.0 - tau_) * q1; }

    double operator()(const Vec& q, const Vec& q1) const {
        const GaussParams g = gaussian_params(*H_, midpoint(q, q1), t_);
        return eval_with(g, q - q1);
    }

    /// Kernel value for precomputed midpoint data; z = q - q1.
    double eval_with(const GaussParams& g, const Vec& z) const {
        double v = 0.0;
        for (const auto& a : law_.atoms()) v += a.mass * g(z + a.location);
        return v;
    }

private:
    const HamiltonSymbol* H_;
    double tau_;
    double t_;
    LevyIncrementLaw law_;
};

inline double one_step_kernel(const HamiltonSymbol& H, double tau, double t, const Vec& q,
                              const Vec& q1) {
    return OneStepKernel(H, tau, t)(q, q1);
}

}  // namespace tauq
