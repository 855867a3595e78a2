#include <doctest.h>

#include <cmath>

#include "tauq/phase_space.hpp"
#include "tauq/rng.hpp"
#include "tauq/semigroup.hpp"
#include "test_util.hpp"

using namespace tauq;

namespace {

std::vector<Vec> random_tuple(int n, RngStream& rng) {
    std::vector<Vec> tuple;
    for (int k = 0; k < 2 * n; ++k) tuple.push_back(vec1(3.0 * (rng.uniform() - 0.5)));
    return tuple;
}

}  // namespace

TEST_CASE("embed / flatten round trip and the tau-continuity rule") {
    RngStream rng(8, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<Vec> tuple = random_tuple(3, rng);
        const PhasePath path = PhasePath::embed(tuple, 1.2, 0.4, vec1(0.5));
        const std::vector<Vec> image = path.jn_image();
        REQUIRE(image.size() == tuple.size());
        for (std::size_t k = 0; k < tuple.size(); ++k) CHECK(image[k][0] == tuple[k][0]);
    }

    // constant tuple: path constant except for the terminal anchor
    const Vec a = vec1(0.7), b = vec1(-0.3), x = vec1(2.0);
    PhasePath flat = PhasePath::embed({a, b, a, b, a, b}, 0.9, 0.5, x);
    for (double s : {0.05, 0.2, 0.45, 0.62, 0.85}) {
        CHECK(flat.q_at(s * 0.9)[0] == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(flat.p_at(s * 0.9)[0] == doctest::Approx(-0.3).epsilon(1e-14));
    }
    CHECK(flat.q_at(0.9)[0] == 2.0);
    CHECK(flat.q_at(0.0)[0] == doctest::Approx(0.7));

    // breakpoint value for tau = 1/2 is the midpoint of the one-sided limits
    const Vec u = vec1(1.0), v = vec1(3.0);
    PhasePath two = PhasePath::embed({u, b, v, b}, 1.0, 0.5, x);
    CHECK(two.q_at(0.5)[0] == doctest::Approx(2.0).epsilon(1e-14));
    // and the generic tau mix
    PhasePath two2 = PhasePath::embed({u, b, v, b}, 1.0, 0.25, x);
    CHECK(two2.q_at(0.5)[0] == doctest::Approx(0.25 * 3.0 + 0.75 * 1.0).epsilon(1e-14));

    CHECK_THROWS_AS(PhasePath::embed({a, b, a}, 1.0, 0.5, x), std::invalid_argument);
}

TEST_CASE("action: constant paths, constant symbols, refinement invariance") {
    HamiltonSymbol H = make_preset("well", LevySpec(1, {{vec1(0.8), 0.6}}));
    const Vec a = vec1(0.6), p = vec1(1.3);

    PhasePath konst = PhasePath::embed({a, p, a, p, a, p, a, p}, 0.7, 0.5, a);
    const Cplx expect = 0.7 * eval_symbol(H, a, p);
    CHECK(std::abs(action(H, konst) - expect) < 1e-14);

    // p = 0 kills every momentum term: action = t * mean of c over segments
    HamiltonSymbol well = make_preset("well");
    RngStream rng(21, 0);
    std::vector<Vec> tuple;
    double csum = 0.0;
    const Vec x = vec1(-0.4);
    for (int k = 0; k < 4; ++k) {
        tuple.push_back(vec1(2.0 * (rng.uniform() - 0.5)));
        tuple.push_back(vec1(0.0));
    }
    for (int k = 0; k < 4; ++k) {
        const Vec& qk = tuple[static_cast<std::size_t>(2 * k)];
        const Vec qn = k < 3 ? tuple[static_cast<std::size_t>(2 * k + 2)] : x;
        csum += well.quad.c(0.5 * qn + 0.5 * qk);
    }
    PhasePath zero_p = PhasePath::embed(tuple, 1.1, 0.5, x);
    CHECK(std::abs(action(well, zero_p) - Cplx{1.1 * csum / 4.0, 0.0}) < 1e-14);

    // tau = 0 evaluates H on the segment values, so re-describing the same
    // step path with doubled n leaves the Riemann sum untouched
    PhasePath coarse = PhasePath::embed({a, p, vec1(1.2), p}, 0.8, 0.0, x);
    PhasePath fine = PhasePath::embed({a, p, a, p, vec1(1.2), p, vec1(1.2), p}, 0.8, 0.0, x);
    CHECK(std::abs(action(H, coarse) - action(H, fine)) < 1e-12);

    // for tau > 0 the breakpoint mixes differ from the segment values and
    // refinement converges to the segment integral at rate 1/n
    const Cplx integral = 0.8 * 0.5 * (eval_symbol(H, a, p) + eval_symbol(H, vec1(1.2), p));
    auto refined = [&](int reps) {
        std::vector<Vec> tuple;
        for (const Vec& qv : {a, vec1(1.2)})
            for (int r = 0; r < reps; ++r) {
                tuple.push_back(qv);
                tuple.push_back(p);
            }
        return PhasePath::embed(tuple, 0.8, 1.0, x);
    };
    const double err4 = std::abs(action(H, refined(4)) - integral);
    const double err16 = std::abs(action(H, refined(16)) - integral);
    CHECK(err16 < err4);
    CHECK(err4 / err16 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("oscillatory kernel: analytic Gaussian and regularized identity") {
    SUBCASE("pure quadratic symbol reproduces the heat kernel") {
        const double t = 0.3;
        OscillatoryQuadSpec spec{std::sqrt(37.0 / t) + 1.0, 2049, 0.0, {}};
        for (double z : {0.0, 0.4, -1.1, 2.2}) {
            const Cplx v = oscillatory_step_kernel(
                [](double p) { return Cplx{p * p, 0.0}; }, t, z, spec);
            const double expect = std::pow(4.0 * M_PI * t, -0.5) * std::exp(-z * z / (4.0 * t));
            CHECK(std::abs(v - Cplx{expect, 0.0}) < 1e-10);
        }
    }

    SUBCASE("flat symbol with eps regularization integrates to one") {
        // the n = 1, H = 0, phi = 1 normalization: the regularized kernel is a
        // delta approximation whose q1-integral is exactly one
        OscillatoryQuadSpec spec{200.0, 4001, 1e-3, {}};
        const int m = 1601;
        const double lo = -4.0, h = 8.0 / (m - 1);
        double mass = 0.0;
        for (int i = 0; i < m; ++i) {
            const double w = (i == 0 || i == m - 1) ? 0.5 : 1.0;
            const Cplx v =
                oscillatory_step_kernel([](double) { return Cplx{0.0, 0.0}; }, 1.0, lo + i * h, spec);
            mass += w * v.real();
        }
        mass *= h;
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }

    SUBCASE("Richardson extrapolation in eps stays on the eps = 0 value") {
        HamiltonSymbol H = make_preset("sin-mass");
        OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, 0.2, 4.0);
        const Cplx plain = hff_step_kernel(H, 0.5, 0.2, vec1(0.4), vec1(-0.2), spec);
        spec.eps_schedule = {1e-5, 5e-6};
        const Cplx extrap = oscillatory_step_kernel_richardson(
            [&](double p) { return eval_symbol(H, vec1(0.5 * 0.4 + 0.5 * -0.2), vec1(p)); }, 0.2,
            0.6, spec);
        CHECK(std::abs(plain - extrap) < 1e-9);
    }
}

TEST_CASE("auto momentum grids damp the integrand below 1e-12 at the edge") {
    for (const char* name : {"sin-mass", "well"}) {
        HamiltonSymbol H = make_preset(name, LevySpec(1, {{vec1(1.0), 0.5}}));
        for (double t : {0.05, 0.3}) {
            const OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, t, 4.0);
            for (double m : {0.0, 1.2, -2.4})
                for (double sign : {-1.0, 1.0})
                    CHECK(std::abs(std::exp(-t * eval_symbol(H, vec1(m), vec1(sign * spec.p_max)))) <
                          1e-12);
        }
    }
}

TEST_CASE("hff_step_kernel matches the composite kernel") {
    const double t = 0.1, tau = 0.5;
    SUBCASE("imaginary part vanishes for symbols even in p") {
        HamiltonSymbol H = make_preset("sin-mass");
        OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, t, 5.0);
        for (double z : {0.0, 0.7, -1.9})
            CHECK(std::abs(hff_step_kernel(H, tau, t, vec1(z), vec1(0.0), spec).imag()) < 1e-10);
    }

    SUBCASE("21 x 21 probe grid, with and without jump atoms") {
        for (bool jumps : {false, true}) {
            HamiltonSymbol H = make_preset(
                "sin-mass", jumps ? std::optional<LevySpec>(LevySpec(1, {{vec1(1.0), 0.5}}))
                                  : std::nullopt);
            OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, t, 4.5);
            double max_err = 0.0;
            for (int i = 0; i <= 20; ++i) {
                for (int j = 0; j <= 20; ++j) {
                    const Vec q = vec1(-2.0 + 0.2 * i), q1 = vec1(-2.0 + 0.2 * j);
                    const Cplx osc = hff_step_kernel(H, tau, t, q, q1, spec);
                    max_err = std::max(max_err,
                                       std::abs(osc - Cplx{one_step_kernel(H, tau, t, q, q1), 0.0}));
                }
            }
            CHECK(max_err < 1e-6);
        }
    }

    SUBCASE("eps = 1e-6 shifts elliptic results by at most the first-order bound") {
        // 1 - e^{-eps p^2} <= eps p^2, so the regularization moves the value
        // by no more than eps Int p^2 |e^{-tH}| dp / (2 pi)
        HamiltonSymbol H = make_preset("sin-mass", LevySpec(1, {{vec1(0.9), 0.4}}));
        OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, t, 4.0);
        OscillatoryQuadSpec reg = spec;
        reg.eps = 1e-6;
        for (double z : {0.0, 0.8, -1.6}) {
            const Vec m = vec1(tau * z + (1.0 - tau) * 0.1);
            double second_moment = 0.0;
            const double hp = 2.0 * spec.p_max / (spec.p_points - 1);
            for (int k = 0; k < spec.p_points; ++k) {
                const double p = -spec.p_max + hp * k;
                second_moment += p * p * std::abs(std::exp(-t * eval_symbol(H, m, vec1(p))));
            }
            second_moment *= hp / (2.0 * M_PI);
            const Cplx a = hff_step_kernel(H, tau, t, vec1(z), vec1(0.1), spec);
            const Cplx b = hff_step_kernel(H, tau, t, vec1(z), vec1(0.1), reg);
            CHECK(std::abs(a - b) <= 1.05 * reg.eps * second_moment);
            CHECK(std::abs(a - b) < 1e-5);
        }
    }

    SUBCASE("under-resolved oscillation warns") {
        HamiltonSymbol H = make_preset("constant");
        OscillatoryQuadSpec tiny{20.0, 32, 0.0, {}};
        warnings::quiet().store(true);
        const long before = warnings::counter().load();
        (void)hff_step_kernel(H, 0.5, 0.1, vec1(4.0), vec1(-4.0), tiny);
        CHECK(warnings::counter().load() > before);
        warnings::quiet().store(false);
    }
}

TEST_CASE("hff_evaluate against the kernel iteration") {
    const SmoothTestFunction phi = SmoothTestFunction::gaussian_bump(vec1(0.0), 1.0);
    const GridSpec grid = GridSpec::line(-10.0, 10.0, 401);
    const Vec x = vec1(0.0);

    SUBCASE("n = 1 is the one-step operator read at the anchor") {
        HamiltonSymbol H = make_preset("sin-mass");
        const OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, 0.25, 20.0);
        const Cplx hff = hff_evaluate(H, 0.5, 0.25, 1, phi, x, grid, spec);
        const double lff = apply_F(H, 0.5, 0.25, phi.sample(grid)).interp(x);
        CHECK(std::abs(hff - Cplx{lff, 0.0}) < 1e-8);
    }

    SUBCASE("constant coefficients: n = 2 equals n = 1") {
        HamiltonSymbol H = make_constant_symbol(1.0, 0.2, 0.3);
        const OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, 0.25, 20.0);
        const Cplx v1 = hff_evaluate(H, 0.5, 0.25, 1, phi, x, grid, spec);
        const OscillatoryQuadSpec spec2 = OscillatoryQuadSpec::for_symbol(H, 0.125, 20.0);
        const Cplx v2 = hff_evaluate(H, 0.5, 0.25, 2, phi, x, grid, spec2);
        CHECK(std::abs(v1 - v2) < 1e-5);
    }

    SUBCASE("variable mass, tau = 0, n = 2 matches the grid iteration") {
        HamiltonSymbol H = make_preset("sin-mass");
        const OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, 0.1, 20.0);
        const Cplx hff = hff_evaluate(H, 0.0, 0.2, 2, phi, x, grid, spec);
        const double lff = chernoff_iterate(H, 0.0, 0.2, 2, phi.sample(grid)).interp(x);
        CHECK(std::abs(hff - Cplx{lff, 0.0}) < 1e-4);
    }

    SUBCASE("cost guards") {
        HamiltonSymbol H = make_preset("constant");
        const OscillatoryQuadSpec spec = OscillatoryQuadSpec::for_symbol(H, 0.1, 20.0);
        CHECK_THROWS_AS(hff_evaluate(H, 0.5, 0.2, 4, phi, x, grid, spec), ConfigError);
        OscillatoryQuadSpec huge = spec;
        huge.p_points = 40000000;
        CHECK_THROWS_AS(hff_evaluate(H, 0.5, 0.2, 2, phi, x, grid, huge), ConfigError);
        CHECK_THROWS_AS(hff_evaluate(H, 0.5, 0.2, 0, phi, x, grid, spec), std::invalid_argument);
    }
}
