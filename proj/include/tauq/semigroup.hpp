#pragma once

#include <memory>
#include <vector>

#include "tauq/grid.hpp"
#include "tauq/kernels.hpp"

namespace tauq {

struct ApplyOptions {
    bool force_direct = false;   // disable the constant-coefficient FFT fast path
    bool warn_truncation = true; // estimate and report kernel mass lost to the grid edge
};

/// Grid discretization of the one-step operator: trapezoid quadrature of the
/// composite kernel against the input, with per-atom support truncation at
/// radius t sup|b| + 10 sqrt(2 A0 t) around each jump location. Building the
/// operator precomputes the midpoint coefficient tables (and, on the
/// constant-coefficient d=1 fast path, the kernel spectrum); apply() is then
/// cheap and reusable across iteration steps.
class OneStepOperator {
public:
    OneStepOperator(const HamiltonSymbol& H, double tau, double t, const GridSpec& grid,
                    const ApplyOptions& opts = {});
    ~OneStepOperator();
    OneStepOperator(OneStepOperator&&) noexcept;

    RealGridFunction apply(const RealGridFunction& phi) const;

    bool uses_fft() const;
    double truncation_radius() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

RealGridFunction apply_F(const HamiltonSymbol& H, double tau, double t,
                         const RealGridFunction& phi, const ApplyOptions& opts = {});

/// n-fold composition [F_tau(t/n)]^n phi with a norm blow-up guard at
/// e^{2 k t} ||phi||_1, k = max(0, -min c) + 1.
RealGridFunction chernoff_iterate(const HamiltonSymbol& H, double tau, double t, int n,
                                  const RealGridFunction& phi, const ApplyOptions& opts = {});

/// Empirical growth exponent log(||F_tau(t) phi|| / ||phi||) / t.
double l1_growth(const HamiltonSymbol& H, double tau, double t, const RealGridFunction& phi);

/// ||F_{tau1}(t) phi - F_{tau2}(t) phi||_1.
double quantization_step_gap(const HamiltonSymbol& H, double tau1, double tau2, double t,
                             const RealGridFunction& phi);

/// Rows of an iteration sweep, as emitted by the convergence harness.
struct ChernoffReport {
    struct Row {
        int n;
        double l1_error;
        double l1_norm;
        double wall_ms;
    };
    std::vector<Row> rows;
};

/// Minimum of c over the lattice (used by the iteration guard and norm bounds).
double min_potential(const HamiltonSymbol& H, const GridSpec& grid);

}  // namespace tauq
