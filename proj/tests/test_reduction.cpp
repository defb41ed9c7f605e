#include "doctest.h"

#include <cmath>
#include <functional>

#include "radialwave/catalog.hpp"
#include "radialwave/jet.hpp"
#include "radialwave/reduction.hpp"

using namespace radialwave;

TEST_CASE("frozen constant-solution residuals") {
    // trans-canonical-scal, n=4 (q=3), constant v=-1: -p^2 v + k v^3 = 1 - 1 = 0
    ReducedODE ode1(OdeKind::TransCanonicalScal, ModelParams(4, critical_power(4), 1));
    CHECK(ode_residual(ode1, 0.3, -1.0, 0, 0) == doctest::Approx(0.0));

    // inver-canonical, n=5, k=1: v=2 exact, v=4 (the as-printed erratum) off by 8
    ReducedODE ode2(OdeKind::InverCanonical, ModelParams(5, conformal_power(5), 1));
    CHECK(ode_residual(ode2, 0.3, 2.0, 0, 0) == doctest::Approx(0.0));
    CHECK(ode_residual(ode2, 0.3, 4.0, 0, 0) == doctest::Approx(8.0));
}

namespace {

// derivatives of a 1-variable closed form via the jet engine (a-direction)
struct Curve {
    std::function<Jet2(Jet2)> f;
    void eval(double x, double& v, double& v1, double& v2) const {
        Jet2 j = f(Jet2::var_a(x));
        v = j.f;
        v1 = j.fa;
        v2 = j.faa;
    }
};

} // namespace

TEST_CASE("catalog families satisfy their reduced ODEs (20 samples, < 1e-8)") {
    // U3 (translation-invariant): U(r) from the closed form, n=5
    {
        ModelParams params(5, inverse_dilation_power(5), -1);
        double a = 1.0 * (5 - 3) / std::pow(std::sqrt(3.0), 3);
        double c = 0.3;
        Curve U{[&](Jet2 r) { return jpow(a * r + c * jpow_int(r, -2), 3.0 / 2); }};
        ReducedODE ode(OdeKind::Trans, params);
        for (int i = 0; i < 20; ++i) {
            double r = 0.6 + 0.12 * i;
            double v, v1, v2;
            U.eval(r, v, v1, v2);
            CHECK(std::abs(ode_residual(ode, r, v, v1, v2)) < 1e-8);
        }
    }
    // IV5 (translation-invariant), n=3
    {
        ModelParams params(3, critical_power(3), 1);
        double A = std::sqrt(0.5);
        Curve U{[&](Jet2 r) { return A * jpow(r, -0.5); }};
        ReducedODE ode(OdeKind::Trans, params);
        for (int i = 0; i < 20; ++i) {
            double r = 0.4 + 0.1 * i;
            double v, v1, v2;
            U.eval(r, v, v1, v2);
            CHECK(std::abs(ode_residual(ode, r, v, v1, v2)) < 1e-8);
        }
    }
    // U1 (scaling-invariant, c=0): constant U in u = t^p U(r/t)
    {
        ModelParams params(3, 3.0, 1);
        ReducedODE ode(OdeKind::Scal, params);
        double Uc = std::sqrt(2.0);
        for (int i = 0; i < 20; ++i) {
            double xi = 0.15 + 0.1 * i;
            if (std::abs(xi - 1.0) < 0.05) continue;
            CHECK(std::abs(ode_residual(ode, xi, Uc, 0, 0)) < 1e-8);
        }
    }
    // U2 (scaling-invariant, c=0), n=4, q=2: U(xi) = (B(1-xi^2))^{-1}
    {
        ModelParams params(4, 2.0, 1);
        double B = 1.0 / (2.0 * (2.0 * (1 - 4) + 4 + 1)); // k(q-1)^2/(2(q(1-n)+n+1))
        Curve U{[&](Jet2 xi) { return jpow(B * (1.0 - xi * xi), -1.0); }};
        ReducedODE ode(OdeKind::Scal, params);
        for (int i = 0; i < 20; ++i) {
            double xi = 0.1 + 0.04 * i; // inside the light cone
            double v, v1, v2;
            U.eval(xi, v, v1, v2);
            CHECK(std::abs(ode_residual(ode, xi, v, v1, v2)) /
                      std::max(1.0, std::abs(v)) < 1e-8);
        }
    }
    // IV6 (conformally invariant): constant U in u = r^p U(x)
    {
        ModelParams params(5, conformal_power(5), 1);
        ReducedODE ode(OdeKind::Inver, params);
        for (int i = 0; i < 20; ++i) {
            double x = 0.3 + 0.2 * i;
            CHECK(std::abs(ode_residual(ode, x, 2.0, 0, 0)) < 1e-12);
        }
    }
}

TEST_CASE("scalode and scalUeq agree through the wave-equation factorization") {
    // For any test function U: with Utilde(x) = x^p U(1/x),
    //   E_alt[Utilde](x) = -x^{p-2} E_scal[U](1/x).
    ModelParams params(3, 3.0, 1);
    double p = exponent_p(params);
    ReducedODE scal(OdeKind::Scal, params);
    ReducedODE alt(OdeKind::ScalAlt, params);
    Curve U{[&](Jet2 z) { return jexp(z * (1.0 / 3)) + z * z * (1.0 / 7) + 0.5; }};
    Curve Ut{[&](Jet2 z) { return jpow(z, p) * (jexp((1.0 / z) * (1.0 / 3)) +
                                                (1.0 / z) * (1.0 / z) * (1.0 / 7) + 0.5); }};
    for (double x : {0.4, 0.7, 1.6, 2.3}) {
        double v, v1, v2, w, w1, w2;
        Ut.eval(x, v, v1, v2);
        U.eval(1.0 / x, w, w1, w2);
        double lhs = ode_residual(alt, x, v, v1, v2);
        double rhs = -real_pow(x, p - 2) * ode_residual(scal, 1.0 / x, w, w1, w2);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("canonical maps: forward o inverse = identity to 1e-12") {
    struct Case {
        OdeKind kind;
        ModelParams params;
        double z, U;
    };
    std::vector<Case> cases = {
        {OdeKind::TransCanonicalScal, ModelParams(3, critical_power(3), 1), 2.7182818, 1.0},
        {OdeKind::TransCanonicalDil, ModelParams(5, inverse_dilation_power(5), -1), 1.4, 0.8},
        {OdeKind::ScalCanonicalDil, ModelParams(3, critical_power(3), 1), 0.6, 1.2},
        {OdeKind::ScalCanonicalDil, ModelParams(3, critical_power(3), 1), 1.7, 1.2},
        {OdeKind::InverCanonical, ModelParams(5, conformal_power(5), 1), 2.0, 0.7},
    };
    for (const auto& c : cases) {
        CanonicalPoint cp = canonical_forward(c.kind, c.params, c.z, c.U);
        auto [z2, U2] = canonical_inverse(c.kind, c.params, cp.x, cp.v);
        CHECK(z2 == doctest::Approx(c.z).epsilon(1e-12));
        CHECK(U2 == doctest::Approx(c.U).epsilon(1e-12));
    }
    // spec examples
    ModelParams crit3(3, critical_power(3), 1);
    auto cp = canonical_forward(OdeKind::TransCanonicalScal, crit3, std::exp(1.0), 1.0);
    CHECK(cp.x == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(cp.v == doctest::Approx(std::exp(0.5)).epsilon(1e-14)); // e^{n/2-1}
    ModelParams id5(5, inverse_dilation_power(5), -1);
    CHECK(canonical_forward(OdeKind::TransCanonicalDil, id5, 1.0, 1.0).x ==
          doctest::Approx(1.0 / 3));
}

TEST_CASE("scal-canonical-dil branches match at xi = 1") {
    ModelParams params(3, critical_power(3), 1);
    double delta = 1e-6;
    double xm = canonical_forward(OdeKind::ScalCanonicalDil, params, 1 - delta, 1.0).x;
    double xp = canonical_forward(OdeKind::ScalCanonicalDil, params, 1 + delta, 1.0).x;
    // the branch formulas meet antisymmetrically: x(1+d) + x(1-d) = O(d^{3/2})
    CHECK(std::abs(xp + xm) < 1e-8);
    CHECK(std::abs(xm) < 2e-3); // both sides collapse to x = 0
}

namespace {

double radicand_root(const QuadratureFamily& fam, double lo, double hi) {
    double flo = quad_radicand(fam, lo);
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double f = quad_radicand(fam, mid);
        if ((f > 0) == (flo > 0)) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("quadrature c=0 reproduces the sech^2 closed form (trans-scal)") {
    ModelParams params(3, critical_power(3), 1);
    QuadratureFamily fam(QuadKind::TransScal, params, 0.0);
    double vt = radicand_root(fam, 0.5, 2.0); // turning point = closed-form maximum
    CHECK(vt == doctest::Approx(std::pow(0.75, 0.25)).epsilon(1e-10));
    // align x = 0 with the turning point
    QuadratureSolution probe(fam, 0.2, vt);
    double shift = probe.x_of_v(vt);
    QuadratureFamily aligned(QuadKind::TransScal, params, 0.0, shift, +1);
    QuadratureSolution sol(aligned, 0.2, vt);
    CHECK(sol.turning_at_hi());
    QuadratureFamily closed(QuadKind::TransScal, params, 0.0); // x + c~ convention, c~ = 0
    for (double x : {-1.5, -1.0, -0.5, -0.2, -0.05}) {
        double v_quad = sol.v_of_x(x);
        double v_closed = quad_closed_form_c0(closed, x);
        CHECK(std::abs(v_quad - v_closed) < 1e-6);
    }
}

TEST_CASE("quadrature c=0 reproduces the power-law closed form (trans-dil, n=5)") {
    ModelParams params(5, inverse_dilation_power(5), -1);
    // closed form v = (a x)^{3/2}, a = (n-3) sqrt(k/(2-n)) = 2/sqrt(3)
    double a = 2.0 / std::sqrt(3.0);
    double v_lo = 0.3;
    double x_lo = std::pow(v_lo, 2.0 / 3) / a;
    QuadratureFamily aligned(QuadKind::TransDil, params, 0.0, -x_lo, +1);
    QuadratureSolution sol(aligned, v_lo, 4.0);
    QuadratureFamily closed(QuadKind::TransDil, params, 0.0); // c~ = 0
    for (double v : {0.4, 0.9, 1.7, 3.2}) {
        double x = sol.x_of_v(v);
        CHECK(x == doctest::Approx(std::pow(v, 2.0 / 3) / a).epsilon(1e-9));
        CHECK(quad_closed_form_c0(closed, x) == doctest::Approx(v).epsilon(1e-6));
    }
}

TEST_CASE("scal-dil with s=+1 equals the trans-scal quadrature pointwise") {
    ModelParams params(3, critical_power(3), 1);
    QuadratureFamily f1(QuadKind::TransScal, params, 0.1, 0.0, +1);
    QuadratureFamily f2(QuadKind::ScalDil, params, 0.1, 0.0, +1, +1);
    QuadratureSolution s1(f1, 0.2, 0.8);
    QuadratureSolution s2(f2, 0.2, 0.8);
    for (double v : {0.25, 0.4, 0.6, 0.75})
        CHECK(s1.x_of_v(v) == doctest::Approx(s2.x_of_v(v)).epsilon(1e-12));
}

TEST_CASE("quadrature round-trip and inverse-ODE residual") {
    ModelParams params(5, inverse_dilation_power(5), -1);
    QuadratureFamily fam(QuadKind::TransDil, params, 0.5, 0.0, +1);
    QuadratureSolution sol(fam, 0.3, 3.0);
    for (double v0 : {0.35, 0.8, 1.6, 2.9}) {
        double x = sol.x_of_v(v0);
        CHECK(std::abs(sol.v_of_x(x) - v0) < 1e-8);
    }
    for (double frac : {0.3, 0.6, 0.9}) {
        double xs = sol.x_min() + frac * (sol.x_max() - sol.x_min());
        CHECK(std::abs(sol.inverse_ode_residual(xs)) < 1e-6);
    }
}

TEST_CASE("quadrature error paths: interior sign change, beyond turning point") {
    ModelParams params(3, critical_power(3), 1);
    QuadratureFamily fam(QuadKind::TransScal, params, 0.0);
    double vt = radicand_root(fam, 0.5, 2.0);
    CHECK_THROWS_AS(QuadratureSolution(fam, 0.2, vt + 0.3), DomainError);
    QuadratureSolution sol(fam, 0.2, vt);
    CHECK_THROWS_AS(sol.v_of_x(sol.x_max() + 0.5), NonMonotone);
}

TEST_CASE("Proposition 4 witness: no point symmetries of the trans-inver ODE") {
    for (int n : {3, 5}) {
        auto rep = no_symmetry_witness(n);
        CAPTURE(n);
        CHECK(rep.pass);
        CHECK(rep.inver[0].defect < 1e-9);      // identity on inver
        CHECK(rep.transinver[0].defect < 1e-9); // identity on trans-inver
        CHECK(rep.inver[1].defect < 1e-9);      // xi-scaling: symmetry of inver
        CHECK(rep.transinver[1].defect > 1e-3); // ... but not of trans-inver
        CHECK(rep.transinver[2].defect > 1e-3); // nor the dilation-flow analogue
    }
}

TEST_CASE("reduced ODEs reject invalid parameters and domains") {
    CHECK_THROWS_AS(ReducedODE(OdeKind::Inver, ModelParams(3, 5.0, 1)), UnsupportedParams);
    CHECK_THROWS_AS(ReducedODE(OdeKind::TransCanonicalScal, ModelParams(3, 3.0, 1)),
                    UnsupportedParams);
    ReducedODE scal(OdeKind::Scal, ModelParams(3, 3.0, 1));
    CHECK_THROWS_AS(ode_residual(scal, 1.0, 1, 0, 0), DomainError);  // xi = 1
    CHECK_THROWS_AS(ode_residual(scal, 0.0, 1, 0, 0), DomainError);  // xi = 0
    ReducedODE trans(OdeKind::Trans, ModelParams(3, 3.0, 1));
    CHECK_THROWS_AS(ode_residual(trans, 0.0, 1, 0, 0), DomainError); // r = 0
}
