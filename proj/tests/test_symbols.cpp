#include <doctest.h>

#include <cmath>

#include "tauq/symbols.hpp"

using namespace tauq;

TEST_CASE("coefficient fields: finite-difference fallbacks and self-checks") {
    ScalarField c(1, [](const Vec& q) { return std::sin(q[0]); });
    CHECK(c.grad(vec1(0.3))[0] == doctest::Approx(std::cos(0.3)).epsilon(1e-8));
    CHECK(c.hess(vec1(0.3))(0, 0) == doctest::Approx(-std::sin(0.3)).epsilon(1e-4));

    // analytic derivatives disagreeing with the values are rejected at construction
    CHECK_THROWS_AS(ScalarField(1, [](const Vec& q) { return std::sin(q[0]); },
                                [](const Vec& q) { return vec1(std::cos(q[0]) + 0.1); }),
                    std::invalid_argument);
    CHECK_THROWS_AS(VectorField(1, [](const Vec& q) { return vec1(q[0] * q[0]); },
                                [](const Vec&) { return mat1(0.0); }),
                    std::invalid_argument);

    MatrixField A(1, [](const Vec& q) { return mat1(2.0 + std::sin(q[0])); });
    CHECK(A.divergence(vec1(0.5))[0] == doctest::Approx(std::cos(0.5)).epsilon(1e-8));
    CHECK(A.hess_trace(vec1(0.5)) == doctest::Approx(-std::sin(0.5)).epsilon(1e-4));

    // d = 2 divergence and hessian trace against a hand-computed field
    MatrixField A2(2, [](const Vec& q) {
        Mat m(2, 2);
        m << 2.0 + std::sin(q[0]), 0.5 * q[0] * q[1], 0.5 * q[0] * q[1], 3.0 + q[1] * q[1];
        return m;
    });
    const Vec q = vec2(0.4, -0.8);
    // Div A = (d0 A00 + d1 A01, d0 A10 + d1 A11) = (cos q0 + 0.5 q0, 0.5 q1 + 2 q1)
    CHECK(A2.divergence(q)[0] == doctest::Approx(std::cos(0.4) + 0.5 * 0.4).epsilon(1e-6));
    CHECK(A2.divergence(q)[1] == doctest::Approx(0.5 * -0.8 + 2.0 * -0.8).epsilon(1e-6));
    // tr Hess = d00 A00 + 2 d01 A01 + d11 A11 = -sin q0 + 2*0.5 + 2
    CHECK(A2.hess_trace(q) == doctest::Approx(-std::sin(0.4) + 1.0 + 2.0).epsilon(1e-3));
}

TEST_CASE("QuadraticSymbol ellipticity spot check") {
    CHECK_THROWS_AS(QuadraticSymbol(MatrixField::identity(1, 0.5), VectorField::zero(1),
                                    ScalarField::constant_field(1, 0.0), 1.0, 1.0),
                    std::invalid_argument);
    // asymmetric A rejected
    CHECK_THROWS_AS(MatrixField(2,
                                [](const Vec&) {
                                    Mat m(2, 2);
                                    m << 1.0, 0.1, 0.0, 1.0;
                                    return m;
                                }),
                    std::invalid_argument);
}

TEST_CASE("LevySpec invariants") {
    CHECK_THROWS_AS(LevySpec(1, {{vec1(0.0), 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(LevySpec(1, {{vec1(1.0), -0.5}}), std::invalid_argument);

    LevySpec levy(1, {{vec1(1.0), 1.0}, {vec1(-2.0), 0.5}});
    CHECK(levy.rate() == doctest::Approx(1.5));
    CHECK(levy.compensator_drift()[0] ==
          doctest::Approx(1.0 / 2.0 + 0.5 * (-2.0) / 5.0).epsilon(1e-15));
    CHECK(levy.recompute_compensator_drift()[0] == levy.compensator_drift()[0]);
}

TEST_CASE("levy_exponent examples and properties") {
    LevySpec one(1, {{vec1(1.0), 1.0}});
    CHECK(std::abs(levy_exponent(one, vec1(0.0))) == 0.0);

    // single atom at p = 2 pi: 1 - e^{2 pi i} + 2 pi i / 2 = i pi
    const Cplx v = levy_exponent(one, vec1(2.0 * M_PI));
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v.imag() == doctest::Approx(M_PI).epsilon(1e-12));

    // symmetric atoms: purely real 2 - 2 cos p
    LevySpec sym(1, {{vec1(1.0), 1.0}, {vec1(-1.0), 1.0}});
    for (double p : {0.3, 1.7, -2.9}) {
        const Cplx s = levy_exponent(sym, vec1(p));
        CHECK(s.imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(s.real() == doctest::Approx(2.0 - 2.0 * std::cos(p)).epsilon(1e-14));
    }

    // nonnegative real part on a probe grid
    LevySpec mixed(1, {{vec1(0.7), 0.8}, {vec1(-1.9), 0.4}});
    for (int k = -40; k <= 40; ++k) CHECK(levy_exponent(mixed, vec1(0.25 * k)).real() >= -1e-14);
}

TEST_CASE("eval_symbol examples") {
    HamiltonSymbol plain = make_constant_symbol(1.0, 0.0, 0.0);
    CHECK(eval_symbol(plain, vec1(0.0), vec1(2.0)) == Cplx{4.0, 0.0});
    CHECK(std::abs(eval_symbol(plain, vec1(1.3), vec1(0.0))) == 0.0);

    LevySpec one(1, {{vec1(1.0), 1.0}});
    HamiltonSymbol withjump = make_constant_symbol(1.0, 0.0, 0.0, one);
    const Cplx v = eval_symbol(withjump, vec1(0.0), vec1(M_PI));
    CHECK(v.real() == doctest::Approx(M_PI * M_PI + 2.0).epsilon(1e-14));
    CHECK(v.imag() == doctest::Approx(M_PI / 2.0).epsilon(1e-14));

    // r(0) = 0 and all p-terms vanish: H(q, 0) = c(q)
    HamiltonSymbol well = make_preset("well", LevySpec(1, {{vec1(1.0), 0.5}}));
    for (double q : {0.0, 0.9, -2.2})
        CHECK(eval_symbol(well, vec1(q), vec1(0.0)) ==
              Cplx{q * q / (1.0 + q * q), 0.0});

    // conjugate symmetry for real coefficient fields
    HamiltonSymbol drift = make_preset("bump-drift", LevySpec(1, {{vec1(0.7), 0.8}}));
    for (double q : {0.2, -1.1}) {
        for (double p : {0.5, 2.3}) {
            const Cplx a = eval_symbol(drift, vec1(q), vec1(p));
            const Cplx b = eval_symbol(drift, vec1(q), vec1(-p));
            CHECK(b.real() == doctest::Approx(a.real()).epsilon(1e-14));
            CHECK(b.imag() == doctest::Approx(-a.imag()).epsilon(1e-14));
        }
    }
}

TEST_CASE("tau_transform: identity cases and the sin-mass closed form") {
    HamiltonSymbol sinmass = make_preset("sin-mass");
    const std::vector<double> probes{0.0, 0.4, -0.9, 1.7, -2.5};

    // tau = 1 leaves every field unchanged
    HamiltonSymbol id = tau_transform(sinmass, 1.0);
    for (double q : probes) {
        CHECK(id.quad.b(vec1(q))[0] == sinmass.quad.b(vec1(q))[0]);
        CHECK(id.quad.c(vec1(q)) == sinmass.quad.c(vec1(q)));
        CHECK(id.quad.A(vec1(q))(0, 0) == sinmass.quad.A(vec1(q))(0, 0));
    }

    // constant coefficients are fixed points for every tau
    HamiltonSymbol cc = make_constant_symbol(2.0, 0.7, -0.3);
    for (double tau : {0.0, 0.25, 0.5}) {
        HamiltonSymbol tc = tau_transform(cc, tau);
        for (double q : probes) {
            CHECK(tc.quad.b(vec1(q))[0] == doctest::Approx(0.7).epsilon(1e-12));
            CHECK(tc.quad.c(vec1(q)) == doctest::Approx(-0.3).epsilon(1e-12));
        }
        CHECK(tc.is_constant_coeff());
    }

    // A = 2 + sin q, tau = 0: b_0 = -2 cos q, c_0 = sin q (independent
    // finite-difference oracle on A alongside the closed form)
    HamiltonSymbol t0 = tau_transform(sinmass, 0.0);
    for (double q : probes) {
        const double fd_div =
            ((2.0 + std::sin(q + 5e-6)) - (2.0 + std::sin(q - 5e-6))) / 1e-5;
        CHECK(t0.quad.b(vec1(q))[0] == doctest::Approx(-2.0 * std::cos(q)).epsilon(1e-10));
        CHECK(t0.quad.b(vec1(q))[0] == doctest::Approx(-2.0 * fd_div).epsilon(1e-8));
        CHECK(t0.quad.c(vec1(q)) == doctest::Approx(std::sin(q)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(tau_transform(sinmass, 1.2), std::invalid_argument);
    CHECK_THROWS_AS(tau_transform(sinmass, -0.1), std::invalid_argument);
}

TEST_CASE("tau_transform is affine in the (b, c) coefficients") {
    // shared A, affine combination alpha + beta = 1 of the lower-order fields
    const double alpha = 0.3, beta = 0.7, tau = 0.4;
    auto mk = [](double s) {
        MatrixField A(1, [](const Vec& q) { return mat1(2.0 + std::sin(q[0])); },
                      [](const Vec& q) { return vec1(std::cos(q[0])); },
                      [](const Vec& q) { return -std::sin(q[0]); });
        VectorField b(1, [s](const Vec& q) { return vec1(s * std::exp(-q[0] * q[0])); });
        ScalarField c(1, [s](const Vec& q) { return s * std::cos(q[0]); });
        return HamiltonSymbol(QuadraticSymbol(std::move(A), std::move(b), std::move(c), 1.0, 3.0));
    };
    HamiltonSymbol h1 = mk(1.0), h2 = mk(-0.5), h3 = mk(alpha * 1.0 + beta * -0.5);
    HamiltonSymbol t1 = tau_transform(h1, tau), t2 = tau_transform(h2, tau),
                   t3 = tau_transform(h3, tau);
    for (double q : {0.0, 0.8, -1.6}) {
        CHECK(t3.quad.b(vec1(q))[0] ==
              doctest::Approx(alpha * t1.quad.b(vec1(q))[0] + beta * t2.quad.b(vec1(q))[0])
                  .epsilon(1e-9));
        CHECK(t3.quad.c(vec1(q)) ==
              doctest::Approx(alpha * t1.quad.c(vec1(q)) + beta * t2.quad.c(vec1(q))).epsilon(1e-9));
    }
}
