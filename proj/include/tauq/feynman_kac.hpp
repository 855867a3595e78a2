#pragma once

#include <cstdint>
#include <functional>

#include "tauq/kernels.hpp"
#include "tauq/rng.hpp"

namespace tauq {

struct PathState {
    Vec position;
    double log_weight = 0.0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
};

/// One-step law of the jump-diffusion matching the composite kernel: with
/// effective (tau-transformed) coefficients,
///   position' = position - dt b_tau + sqrt(2 dt) L Z + X,   L L' = A,
///   log_weight' = log_weight - dt c_tau,
/// where X is an exact increment draw. Build once per (H, tau, dt) and step
/// many paths.
class JumpDiffusionStepper {
public:
    JumpDiffusionStepper(const HamiltonSymbol& H, double tau, double dt);

    void step(PathState& state, RngStream& rng) const;

    double dt() const { return dt_; }
    const LevyIncrementLaw& increment_law() const { return law_; }

private:
    HamiltonSymbol effective_;
    double dt_;
    LevyIncrementLaw law_;
};

/// Single Euler step of the jump-diffusion (convenience wrapper; for a loop
/// over steps build a JumpDiffusionStepper instead).
PathState simulate_step(const HamiltonSymbol& H, double tau, double dt, const PathState& state,
                        RngStream& rng);

/// Sample mean and standard error of e^{log_weight} phi(position_T) over
/// n_paths independent paths. Bit-identical for a fixed seed regardless of
/// the worker count (counter-based per-path streams, fixed-order reduction).
McEstimate mc_estimate(const HamiltonSymbol& H, double tau, double t, const Vec& q0,
                       const std::function<double(const Vec&)>& phi, int n_steps,
                       std::uint64_t n_paths, std::uint64_t seed);

/// Driftless estimator with the change-of-measure weight
///   exp(-1/2 Int A^{-1} b . dX - 1/4 Int A^{-1} b . b ds - Int c ds),
/// stochastic integral in Ito (left-point) form. The overall sign of the
/// stochastic-integral term was calibrated once against the constant-
/// coefficient closed form and frozen. Jump parts are not supported.
McEstimate mc_estimate_girsanov(const HamiltonSymbol& H, double t, const Vec& q0,
                                const std::function<double(const Vec&)>& phi, int n_steps,
                                std::uint64_t n_paths, std::uint64_t seed);

}  // namespace tauq
