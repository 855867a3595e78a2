#include "tauq/generator.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "tauq/parallel.hpp"
#include "tauq/semigroup.hpp"

namespace tauq {

SmoothTestFunction::SmoothTestFunction(int dim, ValueFn value, GradFn grad, HessFn hess,
                                       double support_radius)
    : dim_(dim), value_(std::move(value)), grad_(std::move(grad)), hess_(std::move(hess)),
      support_radius_(support_radius) {
    if (dim_ != 1 && dim_ != 2) throw std::invalid_argument("SmoothTestFunction: dim must be 1 or 2");
    if (!value_ || !grad_ || !hess_)
        throw std::invalid_argument("SmoothTestFunction: value, grad and hess are all required");
    // decay check at the declared radius, plus derivative spot checks
    for (const Vec& dir : detail::probe_points(dim_)) {
        if (dir.norm() == 0.0) continue;
        const Vec q = (support_radius_ * dir / dir.norm()).eval();
        if (std::abs(value_(q)) > 1e-12 || grad_(q).norm() > 1e-12 || hess_(q).norm() > 1e-12)
            throw std::invalid_argument("SmoothTestFunction: does not decay at the support radius");
    }
    for (const Vec& q : detail::probe_points(dim_)) {
        const double h = 1e-5 * (1.0 + q.norm());
        Vec g(dim_);
        for (int k = 0; k < dim_; ++k) {
            Vec qp = q, qm = q;
            qp[k] += h;
            qm[k] -= h;
            g[k] = (value_(qp) - value_(qm)) / (2 * h);
        }
        if ((g - grad_(q)).norm() > 1e-6 * std::max(1.0, grad_(q).norm()) * 10)
            throw std::invalid_argument("SmoothTestFunction: gradient disagrees with finite differences");
    }
}

SmoothTestFunction SmoothTestFunction::gaussian_bump(const Vec& center, double width) {
    const int d = static_cast<int>(center.size());
    const double s2 = width * width;
    auto value = [center, s2](const Vec& q) {
        return std::exp(-(q - center).squaredNorm() / (2.0 * s2));
    };
    auto grad = [center, s2, value](const Vec& q) {
        return (-(q - center) / s2 * value(q)).eval();
    };
    auto hess = [center, s2, value, d](const Vec& q) {
        const Vec u = (q - center) / s2;
        return ((u * u.transpose() - Mat::Identity(d, d) / s2) * value(q)).eval();
    };
    return SmoothTestFunction(d, value, grad, hess, center.norm() + 9.0 * width);
}

RealGridFunction SmoothTestFunction::sample(const GridSpec& grid) const {
    return RealGridFunction::sample(grid, value_);
}

Cplx apply_generator(const HamiltonSymbol& H, double tau, const SmoothTestFunction& phi,
                     const Vec& q) {
    if (tau < 0.0 || tau > 1.0) throw std::invalid_argument("apply_generator: tau outside [0,1]");
    const double u = 1.0 - tau;
    const Vec grad = phi.grad(q);
    const double val = phi(q);

    double out = -(H.quad.A(q) * phi.hess(q)).trace();
    Vec drift = H.quad.b(q);
    double pot = H.quad.c(q);
    if (u != 0.0) {
        drift -= 2.0 * u * H.quad.A.divergence(q);
        pot += u * H.quad.b.divergence(q) - u * u * H.quad.A.hess_trace(q);
    }
    out += drift.dot(grad) + pot * val;

    if (H.levy) {
        double jump = 0.0;
        for (const auto& a : H.levy->atoms())
            jump += a.w * (phi(q + a.y) - val - a.y.dot(grad) / (1.0 + a.y.squaredNorm()));
        out -= jump;
    }
    return Cplx{out, 0.0};
}

namespace {

/// Signed DFT frequencies 2 pi k / (M h), k in [-M/2, M/2).
double dft_frequency(int k, int m, double h) {
    const int signed_k = k <= m / 2 ? k : k - m;
    return 2.0 * M_PI * signed_k / (m * h);
}

ComplexGridFunction spectral_core(const RealGridFunction& phi,
                                  const std::function<Cplx(double q, int k)>& symbol_at) {
    const GridSpec& grid = phi.spec();
    if (grid.dim() != 1)
        throw std::invalid_argument("apply_pdo_spectral: d = 1 only");
    const int m = grid.points_per_axis();
    const double h = grid.spacing(0);

    std::vector<Cplx> in(static_cast<std::size_t>(m)), dft;
    for (int j = 0; j < m; ++j) in[static_cast<std::size_t>(j)] = Cplx{phi[static_cast<std::size_t>(j)], 0.0};
    Eigen::FFT<double> fft;
    fft.fwd(dft, in);

    const double nyquist_amp = std::abs(dft[static_cast<std::size_t>(m / 2)]) * h / std::sqrt(2.0 * M_PI);
    if (nyquist_amp > 1e-8)
        warnings::warn("apply_pdo_spectral: Nyquist-frequency content above 1e-8 (aliasing likely)");

    ComplexGridFunction out(grid);
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
        // out_i = (1/M) sum_k S(q_i, p_k) e^{2 pi i ik/M} DFT_k
        const Cplx omega = std::polar(1.0, 2.0 * M_PI * static_cast<double>(i) / m);
        Cplx phase{1.0, 0.0};
        Cplx acc{0.0, 0.0};
        const double qi = grid.point(i)[0];
        for (int k = 0; k < m; ++k) {
            acc += symbol_at(qi, k) * phase * dft[static_cast<std::size_t>(k)];
            phase *= omega;
        }
        out[i] = acc / static_cast<double>(m);
    });
    return out;
}

}  // namespace

ComplexGridFunction apply_symbol_spectral(const std::function<Cplx(double q, double p)>& symbol,
                                          const RealGridFunction& phi) {
    const int m = phi.spec().points_per_axis();
    const double h = phi.spec().spacing(0);
    return spectral_core(phi, [&](double q, int k) { return symbol(q, dft_frequency(k, m, h)); });
}

ComplexGridFunction apply_pdo_spectral(const HamiltonSymbol& H, const RealGridFunction& phi) {
    const GridSpec& grid = phi.spec();
    if (grid.dim() != 1 || H.dim() != 1)
        throw std::invalid_argument("apply_pdo_spectral: d = 1 only");
    const int m = grid.points_per_axis();
    const double h = grid.spacing(0);

    // coefficient and jump-exponent tables, hoisted out of the double loop
    std::vector<double> a_i(static_cast<std::size_t>(m)), b_i(a_i.size()), c_i(a_i.size());
    for (int i = 0; i < m; ++i) {
        const Vec q = grid.point(static_cast<std::size_t>(i));
        a_i[static_cast<std::size_t>(i)] = H.quad.A(q)(0, 0);
        b_i[static_cast<std::size_t>(i)] = H.quad.b(q)[0];
        c_i[static_cast<std::size_t>(i)] = H.quad.c(q);
    }
    std::vector<Cplx> r_k(static_cast<std::size_t>(m), Cplx{0.0, 0.0});
    std::vector<double> p_k(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        p_k[static_cast<std::size_t>(k)] = dft_frequency(k, m, h);
        if (H.levy) r_k[static_cast<std::size_t>(k)] = levy_exponent(*H.levy, vec1(p_k[static_cast<std::size_t>(k)]));
    }

    // spectral_core hands back q_i; recover the row index from it so the
    // lambda stays stateless across worker threads
    return spectral_core(phi, [&](double q, int k) -> Cplx {
        const double p = p_k[static_cast<std::size_t>(k)];
        const std::size_t i = static_cast<std::size_t>(std::lround((q - grid.lo()[0]) / h));
        return Cplx{c_i[i] + a_i[i] * p * p, b_i[i] * p} + r_k[static_cast<std::size_t>(k)];
    });
}

double derivative_residual(const HamiltonSymbol& H, double tau, double t,
                           const SmoothTestFunction& phi, const GridSpec& grid) {
    if (!(t > 0.0)) throw std::invalid_argument("derivative_residual: t must be positive");
    const RealGridFunction phi_grid = phi.sample(grid);
    const RealGridFunction f_phi = apply_F(H, tau, t, phi_grid);

    std::vector<double> res(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const Vec q = grid.point(i);
        const Cplx gen = apply_generator(H, tau, phi, q);
        res[i] = std::abs((f_phi[i] - phi_grid[i]) / t + gen);
    });
    double sum = 0.0;
    for (double r : res) sum += r;
    return grid.cell_volume() * sum;
}

}  // namespace tauq
