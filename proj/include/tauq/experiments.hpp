#pragma once

#include <string>

#include "tauq/config.hpp"
#include "tauq/semigroup.hpp"

namespace tauq {

/// The iteration sweep behind `converge`: per-n errors against the reference
/// (closed form when constant-coefficient, finest n otherwise), norms,
/// wall-clock times.
ChernoffReport converge_sweep(const ExperimentConfig& cfg);

/// Experiment drivers behind the CLI subcommands. Each returns the full CSV
/// text (RFC 4180, LF line endings, doubles in %.16e). All runs use the
/// standard Gaussian datum exp(-q^2/2) and read point values at q = 0.
/// ConfigError marks invalid requests (exit 2), NumericalGuard aborted runs
/// (exit 3).

/// n-sweep of the iterated one-step operator against a reference solution
/// (closed form when the coefficients are constant, the finest sweep entry
/// otherwise). Columns: n,l1_error,l1_norm,wall_ms.
std::string run_converge(const ExperimentConfig& cfg);

/// Gap between quantizations: raw pair (tau vs 1) and tau vs the rewritten
/// qp-symbol. Columns: n,gap_tau_pair,gap_transformed.
std::string run_tau_compare(const ExperimentConfig& cfg);

/// Monte Carlo estimators against the grid solution at the same step count.
/// Columns: estimator,mean,stderr,grid_value,z_score; the z-score denominator
/// is stderr + grid self-error bound (|u_n - u_2n| at the readout point).
std::string run_mc_validate(const ExperimentConfig& cfg);

/// Empirical L1 growth exponents versus the potential bound max(0, -min c).
/// Columns: t,k_emp,k_hat.
std::string run_norm_growth(const ExperimentConfig& cfg);

/// Phase-space (oscillatory) evaluation against the kernel iteration at the
/// anchor q = 0. Columns: n,hff_value,lff_value,abs_diff.
std::string run_hff_check(const ExperimentConfig& cfg);

}  // namespace tauq
