#include "tauq/semigroup.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <sstream>

#include "tauq/parallel.hpp"

namespace tauq {

namespace {

enum class MidpointCache { per_output, per_input, half_lattice, none };

MidpointCache cache_kind(double tau, bool constant) {
    if (constant) return MidpointCache::per_input;  // any single table works
    if (tau == 1.0) return MidpointCache::per_output;
    if (tau == 0.0) return MidpointCache::per_input;
    if (tau == 0.5) return MidpointCache::half_lattice;
    return MidpointCache::none;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

struct OneStepOperator::Impl {
    const HamiltonSymbol* H;
    double tau;
    double t;
    GridSpec grid;
    ApplyOptions opts;
    OneStepKernel kernel;

    double b_max = 0.0;
    double radius = 0.0;  // per-atom truncation radius around each jump shift
    MidpointCache cache;
    std::vector<GaussParams> table;       // per lattice point or half-lattice point
    bool fft_path = false;
    std::vector<Cplx> kernel_spectrum;    // FFT path, length padded
    std::size_t padded = 0;

    Impl(const HamiltonSymbol& H_, double tau_, double t_, const GridSpec& grid_,
         const ApplyOptions& o)
        : H(&H_), tau(tau_), t(t_), grid(grid_), opts(o), kernel(H_, tau_, t_) {
        if (grid.dim() != H->dim()) throw std::invalid_argument("apply_F: grid/symbol dimension mismatch");

        if (H->quad.b.is_constant()) {
            b_max = H->quad.b(grid.point(0)).norm();
        } else {
            for (std::size_t i = 0; i < grid.size(); ++i)
                b_max = std::max(b_max, H->quad.b(grid.point(i)).norm());
        }
        radius = t * b_max + 10.0 * std::sqrt(2.0 * H->quad.A0 * t);

        fft_path = !opts.force_direct && H->is_constant_coeff() && grid.dim() == 1;
        if (fft_path) {
            build_fft();
        } else {
            build_tables();
        }
    }

    void build_tables() {
        cache = cache_kind(tau, H->is_constant_coeff());
        const int m = grid.points_per_axis();
        switch (cache) {
            case MidpointCache::per_output:
            case MidpointCache::per_input:
                table.reserve(grid.size());
                for (std::size_t i = 0; i < grid.size(); ++i)
                    table.push_back(gaussian_params(*H, grid.point(i), t));
                break;
            case MidpointCache::half_lattice: {
                // midpoints (q_i + q_j)/2 live on the half-spacing lattice
                const std::size_t n = grid.dim() == 1
                                          ? static_cast<std::size_t>(2 * m - 1)
                                          : static_cast<std::size_t>(2 * m - 1) * (2 * m - 1);
                table.reserve(n);
                for (std::size_t s = 0; s < n; ++s) table.push_back(gaussian_params(*H, half_point(s), t));
                break;
            }
            case MidpointCache::none:
                break;
        }
    }

    Vec half_point(std::size_t flat) const {
        const int n = 2 * grid.points_per_axis() - 1;
        Vec q(grid.dim());
        if (grid.dim() == 1) {
            q[0] = grid.lo()[0] + 0.5 * grid.spacing(0) * static_cast<double>(flat);
        } else {
            q[0] = grid.lo()[0] + 0.5 * grid.spacing(0) * static_cast<double>(flat / n);
            q[1] = grid.lo()[1] + 0.5 * grid.spacing(1) * static_cast<double>(flat % n);
        }
        return q;
    }

    const GaussParams& params_for(std::size_t i, std::size_t j) const {
        switch (cache) {
            case MidpointCache::per_output: return table[i];
            case MidpointCache::per_input: return table[j];
            case MidpointCache::half_lattice: {
                if (grid.dim() == 1) return table[i + j];
                const int m = grid.points_per_axis();
                const std::size_t s = (i / m + j / m) * static_cast<std::size_t>(2 * m - 1) +
                                      (i % m + j % m);
                return table[s];
            }
            default: throw std::logic_error("params_for without cache");
        }
    }

    void build_fft() {
        const int m = grid.points_per_axis();
        const double h = grid.spacing(0);
        const GaussParams g = gaussian_params(*H, grid.point(0), t);
        padded = next_pow2(static_cast<std::size_t>(2 * m - 1));
        std::vector<Cplx> k_padded(padded, Cplx{0.0, 0.0});
        for (int lag = -(m - 1); lag <= m - 1; ++lag) {
            const double z = lag * h;
            double v = 0.0;
            for (const auto& a : kernel.increment_law().atoms()) {
                if (std::abs(z + a.location[0]) <= radius) v += a.mass * g.eval1(z + a.location[0]);
            }
            const std::size_t idx = lag >= 0 ? static_cast<std::size_t>(lag)
                                             : padded - static_cast<std::size_t>(-lag);
            k_padded[idx] = Cplx{v, 0.0};
        }
        Eigen::FFT<double> fft;
        kernel_spectrum.resize(padded);
        fft.fwd(kernel_spectrum, k_padded);
    }

    RealGridFunction apply_fft(const RealGridFunction& phi) const {
        const int m = grid.points_per_axis();
        const double h = grid.spacing(0);
        std::vector<Cplx> psi(padded, Cplx{0.0, 0.0});
        for (int j = 0; j < m; ++j)
            psi[static_cast<std::size_t>(j)] =
                Cplx{grid.weight(static_cast<std::size_t>(j)) * phi[static_cast<std::size_t>(j)], 0.0};
        Eigen::FFT<double> fft;
        std::vector<Cplx> spec(padded), conv(padded);
        fft.fwd(spec, psi);
        for (std::size_t k = 0; k < padded; ++k) spec[k] *= kernel_spectrum[k];
        fft.inv(conv, spec);
        RealGridFunction out(grid);
        for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = h * conv[static_cast<std::size_t>(i)].real();
        return out;
    }

    RealGridFunction apply_direct(const RealGridFunction& phi) const {
        const int m = grid.points_per_axis();
        const double hvol = grid.cell_volume();
        const auto& atoms = kernel.increment_law().atoms();

        // weighted input
        std::vector<double> psi(grid.size());
        for (std::size_t j = 0; j < grid.size(); ++j) psi[j] = grid.weight(j) * phi[j];

        RealGridFunction out(grid);
        if (grid.dim() == 1) {
            const double h = grid.spacing(0);
            const double lo = grid.lo()[0];
            parallel_for(grid.size(), [&](std::size_t i) {
                const double qi = lo + h * static_cast<double>(i);
                double acc = 0.0;
                for (const auto& a : atoms) {
                    const double center = qi + a.location[0];
                    long j_lo = static_cast<long>(std::ceil((center - radius - lo) / h)) - 1;
                    long j_hi = static_cast<long>(std::floor((center + radius - lo) / h)) + 1;
                    j_lo = std::max<long>(j_lo, 0);
                    j_hi = std::min<long>(j_hi, m - 1);
                    if (cache == MidpointCache::none) {
                        for (long j = j_lo; j <= j_hi; ++j) {
                            const double qj = lo + h * static_cast<double>(j);
                            const double z = qi - qj + a.location[0];
                            if (std::abs(z) > radius || psi[static_cast<std::size_t>(j)] == 0.0) continue;
                            const GaussParams g =
                                gaussian_params(*H, vec1(tau * qi + (1.0 - tau) * qj), t);
                            acc += a.mass * psi[static_cast<std::size_t>(j)] * g.eval1(z);
                        }
                    } else {
                        for (long j = j_lo; j <= j_hi; ++j) {
                            const double z = qi - (lo + h * static_cast<double>(j)) + a.location[0];
                            if (std::abs(z) > radius) continue;
                            acc += a.mass * psi[static_cast<std::size_t>(j)] *
                                   params_for(i, static_cast<std::size_t>(j)).eval1(z);
                        }
                    }
                }
                out[i] = hvol * acc;
            });
        } else {
            parallel_for(grid.size(), [&](std::size_t i) {
                const Vec qi = grid.point(i);
                double acc = 0.0;
                Vec z(2);
                for (const auto& a : atoms) {
                    const Vec center = qi + a.location;
                    long lo0, hi0, lo1, hi1;
                    axis_window(center[0], 0, lo0, hi0);
                    axis_window(center[1], 1, lo1, hi1);
                    for (long j0 = lo0; j0 <= hi0; ++j0) {
                        for (long j1 = lo1; j1 <= hi1; ++j1) {
                            const std::size_t j = static_cast<std::size_t>(j0) *
                                                      static_cast<std::size_t>(m) +
                                                  static_cast<std::size_t>(j1);
                            if (psi[j] == 0.0) continue;
                            const Vec qj = grid.point(j);
                            z = qi - qj + a.location;
                            if (z.norm() > radius) continue;
                            if (cache == MidpointCache::none) {
                                const GaussParams g = gaussian_params(*H, tau * qi + (1.0 - tau) * qj, t);
                                acc += a.mass * psi[j] * g(z);
                            } else {
                                acc += a.mass * psi[j] * params_for(i, j)(z);
                            }
                        }
                    }
                }
                out[i] = hvol * acc;
            });
        }
        return out;
    }

    void axis_window(double center, int ax, long& jlo, long& jhi) const {
        const double h = grid.spacing(ax);
        const double lo = grid.lo()[ax];
        jlo = std::max<long>(static_cast<long>(std::ceil((center - radius - lo) / h)) - 1, 0);
        jhi = std::min<long>(static_cast<long>(std::floor((center + radius - lo) / h)) + 1,
                             grid.points_per_axis() - 1);
    }

    /// Estimated kernel mass transported beyond the grid box, weighted by the
    /// input datum. Gaussian tails with variance 2 A0 t, per axis.
    double truncation_loss(const RealGridFunction& phi) const {
        const double denom = phi.l1_norm();
        if (denom == 0.0) return 0.0;
        const double erfc_scale = 2.0 * std::sqrt(t * H->quad.A0);  // sigma * sqrt(2)
        const auto& atoms = kernel.increment_law().atoms();
        double lost = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const double w = grid.cell_volume() * std::abs(phi[j]);
            if (w == 0.0) continue;
            const Vec qj = grid.point(j);
            const Vec drift = t * H->quad.b(qj);
            double frac = 0.0;
            for (const auto& a : atoms) {
                for (int ax = 0; ax < grid.dim(); ++ax) {
                    const double center = qj[ax] + drift[ax] - a.location[ax];
                    frac += 0.5 * a.mass *
                            (std::erfc((grid.hi()[ax] - center) / erfc_scale) +
                             std::erfc((center - grid.lo()[ax]) / erfc_scale));
                }
            }
            lost += w * std::min(frac, 1.0);
        }
        return lost / denom;
    }

    RealGridFunction apply(const RealGridFunction& phi) const {
        if (!(phi.spec() == grid)) throw std::invalid_argument("apply_F: grid mismatch");
        if (opts.warn_truncation) {
            const double loss = truncation_loss(phi);
            if (loss > 1e-6) {
                std::ostringstream os;
                os << "apply_F: kernel truncation discards ~" << loss
                   << " of transported mass; grid too small for t=" << t;
                warnings::warn(os.str());
            }
        }
        return fft_path ? apply_fft(phi) : apply_direct(phi);
    }
};

OneStepOperator::OneStepOperator(const HamiltonSymbol& H, double tau, double t,
                                 const GridSpec& grid, const ApplyOptions& opts)
    : impl_(std::make_unique<Impl>(H, tau, t, grid, opts)) {}

OneStepOperator::~OneStepOperator() = default;
OneStepOperator::OneStepOperator(OneStepOperator&&) noexcept = default;

RealGridFunction OneStepOperator::apply(const RealGridFunction& phi) const { return impl_->apply(phi); }

bool OneStepOperator::uses_fft() const { return impl_->fft_path; }

double OneStepOperator::truncation_radius() const { return impl_->radius; }

RealGridFunction apply_F(const HamiltonSymbol& H, double tau, double t,
                         const RealGridFunction& phi, const ApplyOptions& opts) {
    return OneStepOperator(H, tau, t, phi.spec(), opts).apply(phi);
}

double min_potential(const HamiltonSymbol& H, const GridSpec& grid) {
    if (H.quad.c.is_constant()) return H.quad.c(grid.point(0));
    double m = H.quad.c(grid.point(0));
    for (std::size_t i = 1; i < grid.size(); ++i) m = std::min(m, H.quad.c(grid.point(i)));
    return m;
}

RealGridFunction chernoff_iterate(const HamiltonSymbol& H, double tau, double t, int n,
                                  const RealGridFunction& phi, const ApplyOptions& opts) {
    if (n < 1) throw std::invalid_argument("chernoff_iterate: n must be >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("chernoff_iterate: t must be positive");
    const double k_hat = std::max(0.0, -min_potential(H, phi.spec())) + 1.0;
    const double norm0 = phi.l1_norm();

    OneStepOperator op(H, tau, t / n, phi.spec(), opts);
    RealGridFunction u = phi;
    for (int step = 1; step <= n; ++step) {
        u = op.apply(u);
        const double elapsed = t * step / n;
        if (u.l1_norm() > std::exp(2.0 * k_hat * elapsed) * norm0) {
            std::ostringstream os;
            os << "chernoff_iterate: L1 norm " << u.l1_norm() << " exceeds e^{2k t} bound after step "
               << step << "/" << n;
            throw NumericalGuard(os.str());
        }
    }
    return u;
}

double l1_growth(const HamiltonSymbol& H, double tau, double t, const RealGridFunction& phi) {
    if (!(t > 0.0)) throw std::invalid_argument("l1_growth: t must be positive");
    const double n0 = phi.l1_norm();
    if (n0 == 0.0) throw std::invalid_argument("l1_growth: zero input");
    return std::log(apply_F(H, tau, t, phi).l1_norm() / n0) / t;
}

double quantization_step_gap(const HamiltonSymbol& H, double tau1, double tau2, double t,
                             const RealGridFunction& phi) {
    if (tau1 == tau2) return 0.0;
    return l1_distance(apply_F(H, tau1, t, phi), apply_F(H, tau2, t, phi));
}

}  // namespace tauq
