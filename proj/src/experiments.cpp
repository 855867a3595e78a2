#include "tauq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tauq/feynman_kac.hpp"
#include "tauq/generator.hpp"
#include "tauq/phase_space.hpp"
#include "tauq/reference.hpp"
#include "tauq/semigroup.hpp"

namespace tauq {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

SmoothTestFunction standard_datum() { return SmoothTestFunction::gaussian_bump(vec1(0.0), 1.0); }

/// Run-setup check: the standard datum's mass outside the grid must be
/// negligible before any evolution starts.
void check_datum_fits(const GridSpec& grid) {
    const double lo = grid.lo()[0], hi = grid.hi()[0];
    const double outside = 0.5 * (std::erfc(hi / std::sqrt(2.0)) + std::erfc(-lo / std::sqrt(2.0)));
    if (outside > 1e-8)
        throw ConfigError("config: grid too narrow, datum mass outside exceeds 1e-8");
}

std::vector<int> sorted_sweep(const ExperimentConfig& cfg) {
    if (cfg.n_sweep.empty()) throw ConfigError("config: this command requires a non-empty n_sweep");
    std::vector<int> sweep = cfg.n_sweep;
    std::sort(sweep.begin(), sweep.end());
    sweep.erase(std::unique(sweep.begin(), sweep.end()), sweep.end());
    return sweep;
}

RealGridFunction sample_exact_reference(const HamiltonSymbol& H, const ExperimentConfig& cfg,
                                        const GridSpec& grid) {
    ConstantCoeffProblem prob{H.quad.A(vec1(0.0)), H.quad.b(vec1(0.0)), H.quad.c(vec1(0.0)), H.levy};
    double tail = 0.0;
    const GaussianMixture mix =
        evolve_mixture({GaussianComponent::isotropic(vec1(0.0), 1.0)}, prob, cfg.t, &tail);
    return RealGridFunction::sample(grid, [&](const Vec& q) { return eval_mixture(mix, q); });
}

}  // namespace

ChernoffReport converge_sweep(const ExperimentConfig& cfg) {
    const HamiltonSymbol H = cfg.build_symbol();
    const GridSpec grid = cfg.build_grid();
    check_datum_fits(grid);
    const std::vector<int> sweep = sorted_sweep(cfg);
    const RealGridFunction phi = standard_datum().sample(grid);

    std::vector<RealGridFunction> solutions;
    ChernoffReport report;
    solutions.reserve(sweep.size());
    for (int n : sweep) {
        const auto start = std::chrono::steady_clock::now();
        solutions.push_back(chernoff_iterate(H, cfg.tau, cfg.t, n, phi));
        report.rows.push_back({n, 0.0, solutions.back().l1_norm(), elapsed_ms(start)});
    }
    const RealGridFunction reference = H.is_constant_coeff()
                                           ? sample_exact_reference(H, cfg, grid)
                                           : solutions.back();
    for (std::size_t i = 0; i < sweep.size(); ++i)
        report.rows[i].l1_error = l1_distance(solutions[i], reference);
    return report;
}

std::string run_converge(const ExperimentConfig& cfg) {
    const ChernoffReport report = converge_sweep(cfg);
    std::ostringstream csv;
    csv << "n,l1_error,l1_norm,wall_ms\n";
    for (const auto& row : report.rows)
        csv << row.n << "," << fmt(row.l1_error) << "," << fmt(row.l1_norm) << ","
            << fmt(row.wall_ms) << "\n";
    return csv.str();
}

std::string run_tau_compare(const ExperimentConfig& cfg) {
    const HamiltonSymbol H = cfg.build_symbol();
    const GridSpec grid = cfg.build_grid();
    check_datum_fits(grid);
    const std::vector<int> sweep = sorted_sweep(cfg);
    const RealGridFunction phi = standard_datum().sample(grid);
    const HamiltonSymbol H_qp = tau_transform(H, cfg.tau);

    std::ostringstream csv;
    csv << "n,gap_tau_pair,gap_transformed\n";
    for (int n : sweep) {
        const RealGridFunction u_tau = chernoff_iterate(H, cfg.tau, cfg.t, n, phi);
        const RealGridFunction u_one = chernoff_iterate(H, 1.0, cfg.t, n, phi);
        const RealGridFunction u_rewrite = chernoff_iterate(H_qp, 1.0, cfg.t, n, phi);
        csv << n << "," << fmt(l1_distance(u_tau, u_one)) << ","
            << fmt(l1_distance(u_tau, u_rewrite)) << "\n";
    }
    return csv.str();
}

std::string run_mc_validate(const ExperimentConfig& cfg) {
    if (!cfg.mc) throw ConfigError("config: mc-validate requires the mc block");
    const HamiltonSymbol H = cfg.build_symbol();
    const GridSpec grid = cfg.build_grid();
    check_datum_fits(grid);
    const SmoothTestFunction datum = standard_datum();
    const RealGridFunction phi = datum.sample(grid);
    const Vec q0 = vec1(0.0);

    const RealGridFunction u_n = chernoff_iterate(H, cfg.tau, cfg.t, cfg.mc->steps, phi);
    const RealGridFunction u_2n = chernoff_iterate(H, cfg.tau, cfg.t, 2 * cfg.mc->steps, phi);
    const double grid_value = u_n.interp(q0);
    const double grid_err = std::abs(grid_value - u_2n.interp(q0)) + 1e-6;

    auto phi_fn = [&datum](const Vec& q) { return datum(q); };
    std::ostringstream csv;
    csv << "estimator,mean,stderr,grid_value,z_score\n";
    const McEstimate est =
        mc_estimate(H, cfg.tau, cfg.t, q0, phi_fn, cfg.mc->steps, cfg.mc->paths, cfg.mc->seed);
    csv << "feynman_kac," << fmt(est.mean) << "," << fmt(est.std_error) << "," << fmt(grid_value)
        << "," << fmt((est.mean - grid_value) / (est.std_error + grid_err)) << "\n";
    if (!H.levy) {
        const McEstimate gir =
            mc_estimate_girsanov(H, cfg.t, q0, phi_fn, cfg.mc->steps, cfg.mc->paths, cfg.mc->seed);
        csv << "girsanov," << fmt(gir.mean) << "," << fmt(gir.std_error) << "," << fmt(grid_value)
            << "," << fmt((gir.mean - grid_value) / (gir.std_error + grid_err)) << "\n";
    }
    return csv.str();
}

std::string run_norm_growth(const ExperimentConfig& cfg) {
    const HamiltonSymbol H = cfg.build_symbol();
    const GridSpec grid = cfg.build_grid();
    check_datum_fits(grid);
    const RealGridFunction phi = standard_datum().sample(grid);
    const double k_hat = std::max(0.0, -min_potential(H, grid));

    std::ostringstream csv;
    csv << "t,k_emp,k_hat\n";
    for (double t : {0.1, 0.5, 1.0}) {
        csv << fmt(t) << "," << fmt(l1_growth(H, cfg.tau, t, phi)) << "," << fmt(k_hat) << "\n";
    }
    return csv.str();
}

std::string run_hff_check(const ExperimentConfig& cfg) {
    const HamiltonSymbol H = cfg.build_symbol();
    const GridSpec grid = cfg.build_grid();
    check_datum_fits(grid);
    const std::vector<int> sweep = sorted_sweep(cfg);
    for (int n : sweep)
        if (n > 3) throw ConfigError("config: hff-check supports n <= 3 only");
    const SmoothTestFunction datum = standard_datum();
    const RealGridFunction phi = datum.sample(grid);
    const Vec x = vec1(0.0);

    std::ostringstream csv;
    csv << "n,hff_value,lff_value,abs_diff\n";
    for (int n : sweep) {
        const OscillatoryQuadSpec spec =
            OscillatoryQuadSpec::for_symbol(H, cfg.t / n, grid.hi()[0] - grid.lo()[0]);
        const Cplx hff = hff_evaluate(H, cfg.tau, cfg.t, n, datum, x, grid, spec);
        const double lff = chernoff_iterate(H, cfg.tau, cfg.t, n, phi).interp(x);
        csv << n << "," << fmt(hff.real()) << "," << fmt(lff) << "," << fmt(std::abs(hff - Cplx{lff, 0.0}))
            << "\n";
    }
    return csv.str();
}

}  // namespace tauq
