#pragma once

#include <functional>
#include <vector>

#include "tauq/generator.hpp"
#include "tauq/grid.hpp"
#include "tauq/kernels.hpp"

namespace tauq {

/// Piecewise-constant phase-space path on [0,t] with n subintervals and the
/// tau-continuity convention f(s) = tau f(s+0) + (1-tau) f(s-0) at interior
/// breakpoints. q is anchored at q(t) = x; p is left-continuous.
class PhasePath {
public:
    PhasePath(double t, double tau, Vec x, std::vector<Vec> q_values, std::vector<Vec> p_values);

    /// Inverse of the flattening map: builds the path whose discrete image is
    /// the tuple (q_1, p_1, ..., q_n, p_n).
    static PhasePath embed(const std::vector<Vec>& tuple, double t, double tau, const Vec& x);

    /// Discrete image (q(t_1 - 0), p(t_1), ..., q(t_n - 0), p(t_n)).
    std::vector<Vec> jn_image() const;

    double horizon() const { return t_; }
    int segments() const { return n_; }
    double tau() const { return tau_; }
    const Vec& anchor() const { return x_; }
    const std::vector<Vec>& q_values() const { return q_; }
    const std::vector<Vec>& p_values() const { return p_; }

    Vec q_at(double s) const;
    Vec p_at(double s) const;

private:
    double t_;
    double tau_;
    int n_;
    Vec x_;
    std::vector<Vec> q_;
    std::vector<Vec> p_;
};

/// Riemann sum (t/n) sum_k H(tau q_{k+1} + (1-tau) q_k, p_k) with
/// q_{n+1} := x; exact for the piecewise-constant path.
Cplx action(const HamiltonSymbol& H, const PhasePath& path);

/// Momentum-grid description for the oscillatory step integrals, with the
/// regularization factor e^{-eps |p|^2} and an optional eps-schedule for
/// Richardson extrapolation.
struct OscillatoryQuadSpec {
    double p_max;
    int p_points;
    double eps = 0.0;
    std::vector<double> eps_schedule = {};

    /// Grid wide and fine enough for e^{-tH} at horizon t and spatial
    /// displacements up to z_reach.
    static OscillatoryQuadSpec for_symbol(const HamiltonSymbol& H, double t, double z_reach);
};

/// (2 pi)^{-1} Int e^{ipz} e^{-t S(p)} e^{-eps p^2} dp by trapezoid sum on
/// the given momentum grid (d = 1 core used by the tests).
Cplx oscillatory_step_kernel(const std::function<Cplx(double p)>& symbol_exponent, double t,
                             double z, const OscillatoryQuadSpec& spec);

/// Same with linear Richardson extrapolation over spec.eps_schedule.
Cplx oscillatory_step_kernel_richardson(const std::function<Cplx(double p)>& symbol_exponent,
                                        double t, double z, const OscillatoryQuadSpec& spec);

/// Oscillatory form of the one-step kernel
/// (2 pi)^{-d} Int e^{ip(q-q1)} e^{-t H(tau q + (1-tau) q1, p)} e^{-eps|p|^2} dp,
/// which converges to one_step_kernel as the grid refines and eps -> 0.
Cplx hff_step_kernel(const HamiltonSymbol& H, double tau, double t, const Vec& q, const Vec& q1,
                     const OscillatoryQuadSpec& spec);

/// n-fold pre-limit phase-space value with integrand e^{-action} phi(q(0)),
/// evaluated by iterated quadrature, momentum integrals innermost:
/// nested q-integrals of products of hff_step_kernel rows, anchored at x.
/// Refuses n > 3 (the 2n-dimensional integral grows too fast beyond that).
Cplx hff_evaluate(const HamiltonSymbol& H, double tau, double t, int n,
                  const SmoothTestFunction& phi, const Vec& x, const GridSpec& q_grid,
                  const OscillatoryQuadSpec& spec);

}  // namespace tauq
