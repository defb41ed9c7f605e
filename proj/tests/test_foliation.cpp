#include "doctest.h"

#include <cmath>

#include <nlohmann/json.hpp>

#include "radialwave/catalog.hpp"
#include "radialwave/foliation.hpp"
#include "radialwave/verify.hpp"

using namespace radialwave;

namespace {

SolutionFamily make_family(FamilyId id, int n, double q, int k, double c = 0,
                           int branch = +1) {
    SolutionFamily f;
    f.id = id;
    f.params = ModelParams(n, q, k);
    f.c = c;
    f.branch = branch;
    return f;
}

} // namespace

TEST_CASE("translation chart is the verbatim jet") {
    ModelParams params(3, 3.0, 1);
    FoliationChart chart(ChartKind::Translation, params);
    Jet2Sample jet{1.5, 0.7, 2.0, -0.3, 0.4, 0, 0, 0};
    ChartPoint cp = to_chart(chart, jet);
    CHECK(cp.x == 0.7);
    CHECK(cp.v == 2.0);
    CHECK(cp.G == -0.3);
    CHECK(cp.H == 0.4);
}

TEST_CASE("scaling chart constant-invariant case: u = r^p has G=0, H=p, H = pv - xG") {
    ModelParams params(3, 3.0, 1);
    double p = exponent_p(params);
    FoliationChart chart(ChartKind::Scaling, params);
    for (double t : {0.5, 1.5})
        for (double r : {0.4, 2.0}) {
            Jet2 R = Jet2::var_b(r);
            Jet2 u = jpow(R, p);
            Jet2Sample jet{t, r, u.f, u.fa, u.fb, 0, 0, 0};
            ChartPoint cp = to_chart(chart, jet);
            CHECK(cp.v == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(cp.G == doctest::Approx(0.0));
            CHECK(cp.H == doctest::Approx(p).epsilon(1e-14));
            CHECK(cp.H == doctest::Approx(p * cp.v - cp.x * cp.G).epsilon(1e-13));
        }
}

TEST_CASE("conformal chart image of U6 equals the C1 closed form") {
    for (int n : {3, 5}) {
        auto fam = make_family(FamilyId::U6, n, conformal_power(n), 1, 1.0 / 3, +1);
        FoliationChart chart(ChartKind::Conformal, fam.params);
        GHSolution c1{GHSolutionId::C1, fam.params, +1, false};
        for (double t : {1.5, 2.0})
            for (double r : {0.5, 0.9}) {
                ChartPoint cp = to_chart(chart, evaluate(fam, t, r));
                GHJet ref = eval_gh(c1, cp.x, cp.v);
                CHECK(cp.G == doctest::Approx(ref.G).epsilon(1e-11));
                CHECK(cp.H == doctest::Approx(ref.H).epsilon(1e-11));
            }
    }
}

TEST_CASE("chart round-trips recover (u_t, u_r) to 1e-10") {
    struct Case {
        SolutionFamily fam;
        ChartKind kind;
    };
    std::vector<Case> cases = {
        {make_family(FamilyId::U2, 3, 3.0, 1, 0.0), ChartKind::Scaling},
        {make_family(FamilyId::U3, 4, 0.0, -1, 0.3), ChartKind::Translation},
        {make_family(FamilyId::U6, 3, 3.0, 1, 0.5), ChartKind::Conformal},
        {make_family(FamilyId::U8, 3, 3.0, 1, 1.0, -1), ChartKind::TransInversion},
        {make_family(FamilyId::U8, 3, 3.0, 1, 1.0, -1), ChartKind::Scaling},
    };
    for (const auto& c : cases) {
        CAPTURE(chart_name(c.kind));
        FoliationChart chart(c.kind, c.fam.params);
        auto pts = sample_domain(c.fam, 20, 77);
        for (auto [t, r] : pts) {
            Jet2Sample jet = evaluate(c.fam, t, r);
            ChartPoint cp = to_chart(chart, jet);
            auto [ut, ur] = chart_invert(chart, t, r, jet.u, cp.G, cp.H);
            CHECK(std::abs(ut - jet.u_t) / std::max(1.0, std::abs(jet.u_t)) < 1e-10);
            CHECK(std::abs(ur - jet.u_r) / std::max(1.0, std::abs(jet.u_r)) < 1e-10);
        }
    }
}

TEST_CASE("Lemma 1 embedding: scaling-invariant solutions satisfy H = pv - xG") {
    std::vector<SolutionFamily> fams = {
        make_family(FamilyId::U1, 3, 3.0, 1, 0.0),
        make_family(FamilyId::U2, 3, 3.0, 1, 0.0),
        make_family(FamilyId::U2, 4, 2.0, 1, 0.0),
        make_family(FamilyId::U4, 4, static_line_power(4), 1, 0.0),
        make_family(FamilyId::IV1, 3, critical_power(3), 1),
        make_family(FamilyId::IV2, 5, critical_power(5), 1),
    };
    for (const auto& fam : fams) {
        CAPTURE(family_name(fam.id));
        double p = exponent_p(fam.params);
        FoliationChart chart(ChartKind::Scaling, fam.params);
        for (auto [t, r] : sample_domain(fam, 15, 123)) {
            ChartPoint cp = to_chart(chart, evaluate(fam, t, r));
            CHECK(std::abs(cp.H - (p * cp.v - cp.x * cp.G)) /
                      std::max(1.0, std::abs(cp.H)) < 1e-12);
        }
    }
}

TEST_CASE("Lemma 4 embedding: conformally-invariant solutions have G=0, H=-x^2 U'") {
    // IV6 is the constant-invariant case
    auto iv6 = make_family(FamilyId::IV6, 5, conformal_power(5), 1);
    FoliationChart chart5(ChartKind::Conformal, iv6.params);
    for (auto [t, r] : sample_domain(iv6, 10, 5)) {
        ChartPoint cp = to_chart(chart5, evaluate(iv6, t, r));
        CHECK(std::abs(cp.G) < 1e-10);
        CHECK(std::abs(cp.H) < 1e-10);
    }

    // generic conformally-invariant solution from a numeric integration of
    // x^2 U'' + 2x U' - p(p+1) U + k U^q = 0
    ModelParams params(3, conformal_power(3), 1);
    const double p = exponent_p(params);
    const double q = params.q;
    auto acc = [&](double x, double U, double V) {
        return (p * (p + 1) * U - params.k * std::pow(U, q) - 2 * x * V) / (x * x);
    };
    double x = 1.0, U = 1.2, V = 0.3;
    const double h = 1e-4;
    FoliationChart chart(ChartKind::Conformal, params);
    for (int step = 0; step <= 20000; ++step) {
        if (step % 4000 == 0) {
            double r = 0.8;
            double t = std::sqrt(r * r + x * r);
            double rp = std::pow(r, p);
            double xt = 2 * t / r, xr = -(t * t + r * r) / (r * r);
            Jet2Sample jet{t, r, rp * U, rp * V * xt, p / r * rp * U + rp * V * xr, 0, 0, 0};
            ChartPoint cp = to_chart(chart, jet);
            CHECK(std::abs(cp.G) < 1e-9);
            CHECK(std::abs(cp.H - (-x * x * V)) < 1e-9 * std::max(1.0, x * x * std::abs(V)));
        }
        auto f = [&](double xx, double uu, double vv) {
            return std::pair{vv, acc(xx, uu, vv)};
        };
        auto [k1u, k1v] = f(x, U, V);
        auto [k2u, k2v] = f(x + h / 2, U + h / 2 * k1u, V + h / 2 * k1v);
        auto [k3u, k3v] = f(x + h / 2, U + h / 2 * k2u, V + h / 2 * k2v);
        auto [k4u, k4v] = f(x + h, U + h * k3u, V + h * k3v);
        U += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
        V += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        x += h;
    }
}

TEST_CASE("every GH solution passes its resolving system on a 20x20 grid") {
    for (const auto& sol : standard_gh_instantiations()) {
        CAPTURE(gh_name(sol.id));
        CAPTURE(sol.params.n);
        CAPTURE(sol.params.k);
        CAPTURE(sol.branch);
        GridSpec grid = default_grid(sol);
        auto rep = resolving_residual(sol, grid, 1e-9);
        CHECK(rep.evaluated == 400); // the default window is fully admissible
        CHECK(rep.pass);
    }
}

TEST_CASE("S1 residual vanishes identically: (p-1) - p(q+1)/2 = 0") {
    for (double q : {3.0, 2.0, -3.0, 0.5}) {
        double p = 2 / (1 - q);
        CHECK(std::abs((p - 1) - p * (q + 1) / 2) < 1e-14);
    }
}

TEST_CASE("as-printed Prop. 8 forms fail their systems (documented errata)") {
    GHSolution ti1{GHSolutionId::PTi1, ModelParams(3, 3.0, 1), +1, true};
    GridSpec g1;
    g1.x0 = 0.3;
    g1.x1 = 0.5;
    g1.v0 = 9.0;
    g1.v1 = 12.0;
    auto rep1 = resolving_residual(ti1, g1, 1e-9);
    CHECK(rep1.evaluated > 100);
    CHECK(rep1.max_residual > 1e-2);

    GHSolution ti2{GHSolutionId::PTi2, ModelParams(3, 3.0, 1), +1, true};
    GridSpec g2;
    g2.v0 = 2.0;
    g2.v1 = 4.0;
    auto rep2 = resolving_residual(ti2, g2, 1e-9);
    CHECK(rep2.evaluated > 100);
    CHECK(rep2.max_residual > 1e-2);
}

TEST_CASE("potential checks: gradients, curl-freeness, induced (G,H)") {
    for (const auto& pot_id : all_potentials()) {
        GHSolutionId target = induced_gh(pot_id);
        for (const auto& sol : standard_gh_instantiations()) {
            if (sol.id != target || sol.as_printed) continue;
            PotentialSolution pot{pot_id, sol.params, sol.branch};
            GHSolution ghsol{target, sol.params, sol.branch, false};
            GridSpec grid = default_grid(ghsol);
            CAPTURE(potential_name(pot_id));
            CAPTURE(sol.params.n);
            CAPTURE(sol.params.k);
            auto rep = potential_check(pot, grid);
            CHECK(rep.evaluated > 300);
            CHECK(rep.max_gradient_mismatch < 1e-9);
            CHECK(rep.max_curl < 1e-9);
            CHECK(rep.max_induced_mismatch < 1e-10);
            CHECK(rep.max_resolving_residual < 1e-9);
            CHECK(rep.pass);
        }
    }
}

TEST_CASE("Psi-scal requires the conformal power (strict conservation)") {
    PotentialSolution pot{PotentialId::PsiScal, ModelParams(3, 5.0, 1), +1};
    CHECK_THROWS_AS(potential_check(pot, GridSpec{}), UnsupportedParams);
}

TEST_CASE("ansatz replay: a=b=(q+1)/2 has the unique branch pair, a=b=q none") {
    auto rep = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, 3, 3.0, 1);
    CHECK(rep.has_solution);
    CHECK(rep.g == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(rep.h == 0.0);

    auto rep2 = ansatz_coefficient_check(AnsatzCase::Q, 3, 3.0, 1);
    CHECK_FALSE(rep2.has_solution);

    auto rep3 = ansatz_coefficient_check(AnsatzCase::HalfQPlusOne, 1, 3.0, 1);
    CHECK_FALSE(rep3.has_solution);
    CHECK(rep3.n_equals_one_hint);
}

TEST_CASE("resolving reports export as JSON") {
    GHSolution s1{GHSolutionId::S1, ModelParams(3, 3.0, 1), +1, false};
    GridSpec grid = default_grid(s1);
    auto rep = resolving_residual(s1, grid);
    auto j = resolving_report_json(s1, grid, rep);
    CHECK(j["solution"] == "S1");
    CHECK(j["pass"] == true);
}

TEST_CASE("conformal charts reject non-conformal powers") {
    CHECK_THROWS_AS(FoliationChart(ChartKind::Conformal, ModelParams(3, 5.0, 1)),
                    UnsupportedParams);
    CHECK_THROWS_AS(FoliationChart(ChartKind::TransInversion, ModelParams(3, 5.0, 1)),
                    UnsupportedParams);
    CHECK_NOTHROW(FoliationChart(ChartKind::Scaling, ModelParams(3, 5.0, 1)));
}

TEST_CASE("to_chart rejects r <= 0") {
    FoliationChart chart(ChartKind::Scaling, ModelParams(3, 3.0, 1));
    Jet2Sample jet{1.0, 0.0, 1, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(to_chart(chart, jet), DomainError);
}
