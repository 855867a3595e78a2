#include "tauq/phase_space.hpp"

#include <cmath>
#include <sstream>

#include "tauq/parallel.hpp"

namespace tauq {

PhasePath::PhasePath(double t, double tau, Vec x, std::vector<Vec> q_values,
                     std::vector<Vec> p_values)
    : t_(t), tau_(tau), n_(static_cast<int>(q_values.size())), x_(std::move(x)),
      q_(std::move(q_values)), p_(std::move(p_values)) {
    if (!(t_ > 0.0)) throw std::invalid_argument("PhasePath: t must be positive");
    if (tau_ < 0.0 || tau_ > 1.0) throw std::invalid_argument("PhasePath: tau outside [0,1]");
    if (q_.empty() || q_.size() != p_.size())
        throw std::invalid_argument("PhasePath: q/p segment counts differ");
}

PhasePath PhasePath::embed(const std::vector<Vec>& tuple, double t, double tau, const Vec& x) {
    if (tuple.empty() || tuple.size() % 2 != 0)
        throw std::invalid_argument("PhasePath::embed: tuple length must be 2n");
    std::vector<Vec> q, p;
    q.reserve(tuple.size() / 2);
    p.reserve(tuple.size() / 2);
    for (std::size_t k = 0; k < tuple.size(); k += 2) {
        q.push_back(tuple[k]);
        p.push_back(tuple[k + 1]);
    }
    return PhasePath(t, tau, x, std::move(q), std::move(p));
}

std::vector<Vec> PhasePath::jn_image() const {
    std::vector<Vec> tuple;
    tuple.reserve(2 * q_.size());
    for (std::size_t k = 0; k < q_.size(); ++k) {
        tuple.push_back(q_[k]);
        tuple.push_back(p_[k]);
    }
    return tuple;
}

Vec PhasePath::q_at(double s) const {
    if (s < 0.0 || s > t_) throw std::invalid_argument("PhasePath: s outside [0,t]");
    const double step = t_ / n_;
    if (s >= t_ - 1e-12 * t_) return x_;
    if (s <= 1e-12 * t_) return q_.front();
    const double ratio = s / step;
    const double nearest = std::round(ratio);
    const int k = static_cast<int>(nearest);
    if (std::abs(ratio - nearest) < 1e-9 && k >= 1 && k <= n_ - 1) {
        // interior breakpoint: tau-weighted mix of the one-sided limits
        return tau_ * q_[static_cast<std::size_t>(k)] + (1.0 - tau_) * q_[static_cast<std::size_t>(k - 1)];
    }
    const int seg = std::min(static_cast<int>(ratio), n_ - 1);
    return q_[static_cast<std::size_t>(seg)];
}

Vec PhasePath::p_at(double s) const {
    if (s < 0.0 || s > t_) throw std::invalid_argument("PhasePath: s outside [0,t]");
    const double step = t_ / n_;
    if (s <= 1e-12 * t_) return p_.front();
    // left-continuous: p(s) = p_k on (t_{k-1}, t_k]
    const int k = static_cast<int>(std::ceil(s / step - 1e-9));
    return p_[static_cast<std::size_t>(std::min(std::max(k, 1), n_) - 1)];
}

Cplx action(const HamiltonSymbol& H, const PhasePath& path) {
    const int n = path.segments();
    const double dt = path.horizon() / n;
    Cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const Vec& qk = path.q_values()[static_cast<std::size_t>(k)];
        const Vec& q_next = k + 1 < n ? path.q_values()[static_cast<std::size_t>(k + 1)] : path.anchor();
        const Vec m = path.tau() * q_next + (1.0 - path.tau()) * qk;
        acc += eval_symbol(H, m, path.p_values()[static_cast<std::size_t>(k)]);
    }
    return dt * acc;
}

OscillatoryQuadSpec OscillatoryQuadSpec::for_symbol(const HamiltonSymbol& H, double t,
                                                    double z_reach) {
    double min_c = H.quad.c(vec1(0.0)), b_max = H.quad.b(vec1(0.0)).norm();
    if (!H.quad.is_constant()) {
        for (int i = -48; i <= 48; ++i) {
            const Vec q = vec1(0.25 * i);
            min_c = std::min(min_c, H.quad.c(q));
            b_max = std::max(b_max, H.quad.b(q).norm());
        }
    }
    const double p_max =
        std::sqrt((37.0 + t * std::max(0.0, -min_c)) / (t * H.quad.a0)) + 1.0;
    double reach = z_reach + t * b_max + 12.0 * std::sqrt(2.0 * H.quad.A0 * t) + 1.0;
    if (H.levy) reach += LevyIncrementLaw(H.levy, t).reach();
    // anti-aliasing spacing from the kernel reach, tightened to keep the
    // phase advance per node below pi/4 across the whole z range
    const double h_p = std::min(2.0 * M_PI / (1.5 * reach), M_PI / (4.05 * std::max(z_reach, 0.1)));
    int n = static_cast<int>(std::ceil(2.0 * p_max / h_p)) + 1;
    n = std::max(n, 257);
    if (n % 2 == 0) ++n;  // symmetric grid with a node at p = 0
    return {p_max, n, 0.0, {}};
}

Cplx oscillatory_step_kernel(const std::function<Cplx(double p)>& symbol_exponent, double t,
                             double z, const OscillatoryQuadSpec& spec) {
    const int n = spec.p_points;
    const double h = 2.0 * spec.p_max / (n - 1);
    if (std::abs(z) * h > M_PI / 4.0)
        warnings::warn("oscillatory kernel: momentum grid under-resolves the phase oscillation");
    Cplx acc{0.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const double p = -spec.p_max + h * k;
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        const Cplx expo = Cplx{0.0, p * z} - t * symbol_exponent(p) - spec.eps * p * p;
        acc += w * std::exp(expo);
    }
    return acc * (h / (2.0 * M_PI));
}

Cplx oscillatory_step_kernel_richardson(const std::function<Cplx(double p)>& symbol_exponent,
                                        double t, double z, const OscillatoryQuadSpec& spec) {
    if (spec.eps_schedule.size() < 2)
        throw std::invalid_argument("richardson: need at least two eps values");
    OscillatoryQuadSpec s = spec;
    const std::size_t m = spec.eps_schedule.size();
    const double e1 = spec.eps_schedule[m - 2], e2 = spec.eps_schedule[m - 1];
    s.eps = e1;
    const Cplx v1 = oscillatory_step_kernel(symbol_exponent, t, z, s);
    s.eps = e2;
    const Cplx v2 = oscillatory_step_kernel(symbol_exponent, t, z, s);
    // linear model in eps
    return (v2 * e1 - v1 * e2) / (e1 - e2);
}

Cplx hff_step_kernel(const HamiltonSymbol& H, double tau, double t, const Vec& q, const Vec& q1,
                     const OscillatoryQuadSpec& spec) {
    if (H.dim() != 1) throw std::invalid_argument("hff_step_kernel: d = 1 only");
    if (!(t > 0.0)) throw std::invalid_argument("hff_step_kernel: t must be positive");
    const Vec m = tau * q + (1.0 - tau) * q1;
    const double a = H.quad.A(m)(0, 0);
    const double b = H.quad.b(m)[0];
    const double c = H.quad.c(m);
    const double z = q[0] - q1[0];

    if (!H.levy) {
        return oscillatory_step_kernel(
            [a, b, c](double p) { return Cplx{c + a * p * p, b * p}; }, t, z, spec);
    }
    const auto& atoms = H.levy->atoms();
    return oscillatory_step_kernel(
        [a, b, c, &atoms](double p) {
            Cplx r{0.0, 0.0};
            for (const auto& at : atoms) {
                const double phase = at.y[0] * p;
                r += at.w * (Cplx{1.0 - std::cos(phase), -std::sin(phase)} +
                             Cplx{0.0, phase / (1.0 + at.y[0] * at.y[0])});
            }
            return Cplx{c + a * p * p, b * p} + r;
        },
        t, z, spec);
}

Cplx hff_evaluate(const HamiltonSymbol& H, double tau, double t, int n,
                  const SmoothTestFunction& phi, const Vec& x, const GridSpec& q_grid,
                  const OscillatoryQuadSpec& spec) {
    if (H.dim() != 1 || q_grid.dim() != 1)
        throw std::invalid_argument("hff_evaluate: d = 1 only");
    if (n < 1) throw std::invalid_argument("hff_evaluate: n must be >= 1");
    if (n > 3) throw ConfigError("hff_evaluate: n > 3 refused (2n-dimensional integral)");
    const std::size_t m = q_grid.size();
    const double budget = static_cast<double>(spec.p_points) *
                          (static_cast<double>(m) + (n > 1 ? static_cast<double>(m) * m : 0.0));
    if (budget > 2.5e9) {
        std::ostringstream os;
        os << "hff_evaluate: requested quadrature (" << budget << " kernel-sample ops) exceeds the cost guard";
        throw ConfigError(os.str());
    }

    const double dt = t / n;
    const double h = q_grid.spacing(0);

    // u_1 = phi; u_{k+1}(q) = Int K(q, q') u_k(q') dq'; value = Int K(x, q') u_{n-1}... anchored row last
    std::vector<Cplx> u(m);
    for (std::size_t j = 0; j < m; ++j) u[j] = Cplx{phi(q_grid.point(j)), 0.0};

    if (n > 1) {
        std::vector<Cplx> table(m * m);
        parallel_for(m, [&](std::size_t i) {
            for (std::size_t j = 0; j < m; ++j)
                table[i * m + j] = hff_step_kernel(H, tau, dt, q_grid.point(i), q_grid.point(j), spec);
        });
        std::vector<Cplx> next(m);
        for (int level = 1; level < n; ++level) {
            parallel_for(m, [&](std::size_t i) {
                Cplx acc{0.0, 0.0};
                for (std::size_t j = 0; j < m; ++j) acc += q_grid.weight(j) * table[i * m + j] * u[j];
                next[i] = h * acc;
            });
            std::swap(u, next);
        }
    }

    Cplx value{0.0, 0.0};
    for (std::size_t j = 0; j < m; ++j)
        value += q_grid.weight(j) * hff_step_kernel(H, tau, dt, x, q_grid.point(j), spec) * u[j];
    return h * value;
}

}  // namespace tauq
