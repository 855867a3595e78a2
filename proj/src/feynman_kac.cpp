#include "tauq/feynman_kac.hpp"

#include <cmath>
#include <vector>

#include "tauq/parallel.hpp"

namespace tauq {

namespace {

// Frozen by the constant-coefficient calibration: with kernel drift -t b the
// reweighting exponent carries -1/2 Int A^{-1} b . dX.
constexpr double kGirsanovSign = -1.0;

Mat cholesky_factor(const Mat& A) {
    if (A.rows() == 1) {
        if (!(A(0, 0) > 1e-10))
            throw NumericalGuard("simulate_step: diffusion matrix not positive definite");
        return mat1(std::sqrt(A(0, 0)));
    }
    Eigen::LLT<Mat> llt(A);
    if (llt.info() != Eigen::Success)
        throw NumericalGuard("simulate_step: Cholesky failed (ellipticity violation)");
    return llt.matrixL();
}

McEstimate reduce(const std::vector<double>& values) {
    const std::size_t n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

}  // namespace

JumpDiffusionStepper::JumpDiffusionStepper(const HamiltonSymbol& H, double tau, double dt)
    : effective_(tau == 1.0 ? H : tau_transform(H, tau)), dt_(dt),
      law_(H.levy, dt, -1, H.dim()) {
    if (!(dt > 0.0)) throw std::invalid_argument("simulate_step: dt must be positive");
}

void JumpDiffusionStepper::step(PathState& state, RngStream& rng) const {
    const int d = effective_.dim();
    const Vec& q = state.position;
    const Mat L = cholesky_factor(effective_.quad.A(q));
    Vec z(d);
    for (int k = 0; k < d; ++k) z[k] = rng.normal();

    Vec next = q - dt_ * effective_.quad.b(q) + std::sqrt(2.0 * dt_) * (L * z);
    if (effective_.levy) next += law_.sample(rng);
    state.log_weight -= dt_ * effective_.quad.c(q);
    state.position = std::move(next);
}

PathState simulate_step(const HamiltonSymbol& H, double tau, double dt, const PathState& state,
                        RngStream& rng) {
    JumpDiffusionStepper stepper(H, tau, dt);
    PathState next = state;
    stepper.step(next, rng);
    return next;
}

McEstimate mc_estimate(const HamiltonSymbol& H, double tau, double t, const Vec& q0,
                       const std::function<double(const Vec&)>& phi, int n_steps,
                       std::uint64_t n_paths, std::uint64_t seed) {
    if (n_steps < 1) throw std::invalid_argument("mc_estimate: n_steps must be >= 1");
    if (n_paths < 100) throw std::invalid_argument("mc_estimate: need at least 100 paths");
    const JumpDiffusionStepper stepper(H, tau, t / n_steps);

    std::vector<double> payoff(n_paths);
    parallel_for(n_paths, [&](std::size_t path) {
        RngStream rng(seed, path);
        PathState state{q0, 0.0};
        for (int s = 0; s < n_steps; ++s) stepper.step(state, rng);
        payoff[path] = std::exp(state.log_weight) * phi(state.position);
    });
    return reduce(payoff);
}

McEstimate mc_estimate_girsanov(const HamiltonSymbol& H, double t, const Vec& q0,
                                const std::function<double(const Vec&)>& phi, int n_steps,
                                std::uint64_t n_paths, std::uint64_t seed) {
    if (n_steps < 1) throw std::invalid_argument("mc_estimate_girsanov: n_steps must be >= 1");
    if (n_paths < 100) throw std::invalid_argument("mc_estimate_girsanov: need at least 100 paths");
    if (H.levy) throw std::invalid_argument("mc_estimate_girsanov: jump parts not supported");
    const double dt = t / n_steps;
    const int d = H.dim();

    std::vector<double> payoff(n_paths);
    parallel_for(n_paths, [&](std::size_t path) {
        RngStream rng(seed, path);
        Vec q = q0;
        double ito = 0.0, quad_term = 0.0, pot_term = 0.0;
        Vec z(d);
        for (int s = 0; s < n_steps; ++s) {
            const Mat A = H.quad.A(q);
            const Mat L = cholesky_factor(A);
            const Vec b = H.quad.b(q);
            const Vec ainv_b = A.llt().solve(b);
            for (int k = 0; k < d; ++k) z[k] = rng.normal();
            const Vec dx = (std::sqrt(2.0 * dt) * (L * z)).eval();
            ito += ainv_b.dot(dx);
            quad_term += ainv_b.dot(b) * dt;
            pot_term += H.quad.c(q) * dt;
            q += dx;
        }
        payoff[path] =
            std::exp(kGirsanovSign * 0.5 * ito - 0.25 * quad_term - pot_term) * phi(q);
    });
    return reduce(payoff);
}

}  // namespace tauq
