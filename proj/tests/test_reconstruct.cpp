#include "doctest.h"

#include <cmath>
#include <vector>

#include "radialwave/catalog.hpp"
#include "radialwave/reconstruct.hpp"

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

// Catmull-Rom bicubic interpolation of tabulated (G,H) on a uniform grid;
// the round-trip test drives reconstruction from sampled data, not closed forms.
struct GHTable {
    double x0, x1, v0, v1;
    int nx, nv;
    std::vector<double> G, H; // row-major [i*nv + j]

    static double cr(double fm1, double f0, double f1, double f2, double s) {
        return f0 + 0.5 * s * (f1 - fm1 + s * (2 * fm1 - 5 * f0 + 4 * f1 - f2 +
                                               s * (3 * (f0 - f1) + f2 - fm1)));
    }
    double interp(const std::vector<double>& F, double x, double v) const {
        double gx = (x - x0) / (x1 - x0) * (nx - 1);
        double gv = (v - v0) / (v1 - v0) * (nv - 1);
        int i = std::clamp(int(std::floor(gx)), 1, nx - 3);
        int j = std::clamp(int(std::floor(gv)), 1, nv - 3);
        double sx = gx - i, sv = gv - j;
        double rows[4];
        for (int a = -1; a <= 2; ++a) {
            const double* row = &F[(i + a) * nv];
            rows[a + 1] = cr(row[j - 1], row[j], row[j + 1], row[j + 2], sv);
        }
        return cr(rows[0], rows[1], rows[2], rows[3], sx);
    }
    std::pair<double, double> operator()(double x, double v) const {
        if (x < x0 || x > x1 || v < v0 || v > v1)
            throw DomainError("GH table: point outside the tabulated window");
        return {interp(G, x, v), interp(H, x, v)};
    }
};

} // namespace

TEST_CASE("S1 reconstruction recovers U1 (separable case)") {
    ModelParams params(3, 3.0, 1);
    // U1 branch +, c = -0.5: u = sqrt(2)/(t - 0.5); its scaling-chart image is
    // S1 with the opposite branch sign
    auto u1 = make_family(FamilyId::U1, 3, 3.0, 1, -0.5, +1);
    GHSolution s1{GHSolutionId::S1, params, -1, false};
    ReconstructionProblem prob(FoliationChart(ChartKind::Scaling, params),
                               gh_value_fn(s1));
    prob.seed_t = 1.5;
    prob.seed_r = 1.0;
    prob.seed_u = evaluate(u1, 1.5, 1.0).u;
    prob.grid = {1.3, 1.7, 41, 0.8, 1.2, 41}; // fine enough for the FD residual
    ReconstructedField f = reconstruct(prob);
    double worst = 0;
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j) {
            double want = evaluate(u1, f.ts[i], f.rs[j]).u;
            worst = std::max(worst, std::abs(f.at(i, j) - want) / std::max(1.0, want));
        }
    CHECK(worst < 1e-8);
    CHECK(f.max_path_mismatch < 1e-8);
    CHECK(f.max_residual < 1e-6);
}

TEST_CASE("C1 reconstruction recovers U6 up to a constant fit") {
    ModelParams params(3, conformal_power(3), 1);
    auto u6 = make_family(FamilyId::U6, 3, params.q, 1, 1.0 / 3, +1);
    GHSolution c1{GHSolutionId::C1, params, +1, false};
    ReconstructionProblem prob(FoliationChart(ChartKind::Conformal, params),
                               gh_value_fn(c1));
    prob.seed_t = 2.0;
    prob.seed_r = 0.6;
    prob.seed_u = evaluate(u6, 2.0, 0.6).u;
    prob.grid = {1.8, 2.2, 33, 0.45, 0.8, 33};
    ReconstructedField f = reconstruct(prob);
    // fit the U6 constant from one reconstructed value, then compare the field
    double a = 2 * std::sqrt(1.0 / 8.0);
    double t_fit = f.ts[2], r_fit = f.rs[2];
    double c_fit = (1.0 / f.at(2, 2) - a * t_fit) / (t_fit * t_fit - r_fit * r_fit);
    CHECK(c_fit == doctest::Approx(1.0 / 3).epsilon(1e-8));
    auto u6_fit = make_family(FamilyId::U6, 3, params.q, 1, c_fit, +1);
    double worst = 0;
    for (int i = 0; i < 33; ++i)
        for (int j = 0; j < 33; ++j) {
            double want = evaluate(u6_fit, f.ts[i], f.rs[j]).u;
            worst = std::max(worst, std::abs(f.at(i, j) - want) / std::max(1.0, want));
        }
    CHECK(worst < 1e-6);
    CHECK(f.max_path_mismatch < 1e-8);
    CHECK(f.max_residual < 1e-6);
}

TEST_CASE("corrupted (G,H) pair raises CompatibilityError") {
    ModelParams params(3, conformal_power(3), 1);
    GHSolution c1{GHSolutionId::C1, params, +1, false};
    auto clean = gh_value_fn(c1);
    GHValueFn corrupted = [clean](double x, double v) {
        auto [G, H] = clean(x, v);
        return std::make_pair(G, H * (1.0 + 1e-3)); // breaks mixed-derivative equality
    };
    auto u6 = make_family(FamilyId::U6, 3, params.q, 1, 1.0 / 3, +1);
    ReconstructionProblem prob(FoliationChart(ChartKind::Conformal, params), corrupted);
    prob.seed_t = 2.0;
    prob.seed_r = 0.6;
    prob.seed_u = evaluate(u6, 2.0, 0.6).u;
    prob.grid = {1.6, 2.4, 9, 0.35, 0.9, 9};
    CHECK_THROWS_AS(reconstruct(prob), CompatibilityError);
}

TEST_CASE("paths that cross a chart singularity raise PathSingular") {
    ModelParams params(3, conformal_power(3), 1);
    GHSolution c1{GHSolutionId::C1, params, +1, false};
    auto u6 = make_family(FamilyId::U6, 3, params.q, 1, 1.0 / 3, +1);
    ReconstructionProblem prob(FoliationChart(ChartKind::Conformal, params),
                               gh_value_fn(c1));
    prob.seed_t = 2.0;
    prob.seed_r = 0.6;
    prob.seed_u = evaluate(u6, 2.0, 0.6).u;
    prob.grid = {1.6, 2.4, 9, 0.35, 2.2, 9}; // the row crosses t = r (x = 0)
    CHECK_THROWS_AS(reconstruct(prob), PathSingular);
}

TEST_CASE("constant sweep: one-parameter family, pairwise distinct") {
    ModelParams params(3, 3.0, 1);
    GHSolution s1{GHSolutionId::S1, params, -1, false};
    ReconstructionProblem prob(FoliationChart(ChartKind::Scaling, params),
                               gh_value_fn(s1));
    prob.seed_t = 1.5;
    prob.seed_r = 1.0;
    prob.grid = {1.4, 1.8, 33, 0.8, 1.2, 33};
    // seeds from U1 members with c in {-1, 0, 0.5}: u0 = sqrt(2)/(t0 - c)
    std::vector<double> seeds;
    for (double c : {-1.0, 0.0, 0.5}) seeds.push_back(std::sqrt(2.0) / (1.5 - c));
    auto rep = constant_sweep(prob, seeds, 1e-6);
    CHECK(rep.members.size() == 3);
    CHECK(rep.pairwise_distinct);
    CHECK(rep.all_pass);
}

TEST_CASE("constant sweep on P-trans: distinct non-invariant fields") {
    ModelParams params(3, 5.0, 1); // critical power, D = n(1-q)+1+q > 0 case: D = -6
    // use q=2, n=4 instead: D = 4(1-2)+3 = -1; simpler: q=0.5, n=3: D = 3(0.5)+1.5 = 3
    ModelParams p2(3, 0.5, 1);
    GHSolution pt{GHSolutionId::PTrans, p2, +1, false};
    ReconstructionProblem prob(FoliationChart(ChartKind::Translation, p2),
                               gh_value_fn(pt));
    prob.seed_t = 1.0;
    prob.seed_r = 1.0;
    prob.grid = {0.9, 1.3, 33, 0.8, 1.2, 33};
    auto rep = constant_sweep(prob, {0.8, 1.1, 1.5}, 1e-6);
    CHECK(rep.members.size() == 3);
    CHECK(rep.pairwise_distinct);
    CHECK(rep.all_pass);
}

TEST_CASE("round trip through tabulated and interpolated (G,H)") {
    // catalog -> to_chart samples on a regular (x,v) grid -> bicubic
    // interpolation -> reconstruct -> catalog field recovered to 1e-6
    ModelParams params(3, conformal_power(3), 1);
    auto u6 = make_family(FamilyId::U6, 3, params.q, 1, 1.0 / 3, +1);
    FoliationChart chart(ChartKind::Conformal, params);

    GHTable table;
    table.x0 = 1.5;
    table.x1 = 13.0;
    table.v0 = 0.02;
    table.v1 = 0.55;
    table.nx = 200;
    table.nv = 200;
    table.G.resize(table.nx * table.nv);
    table.H.resize(table.nx * table.nv);
    // realize each (x,v) node as a space-time point of the solution: for fixed
    // x, v(r) = r u(t(r), r) with t = sqrt(r^2 + x r) is monotone; bisect in r
    auto v_of_r = [&](double x, double r) {
        double t = std::sqrt(r * r + x * r);
        return r * evaluate(u6, t, r).u;
    };
    for (int i = 0; i < table.nx; ++i) {
        double x = table.x0 + (table.x1 - table.x0) * i / (table.nx - 1);
        for (int j = 0; j < table.nv; ++j) {
            double v = table.v0 + (table.v1 - table.v0) * j / (table.nv - 1);
            double lo = 1e-4, hi = 50.0;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                (v_of_r(x, mid) < v ? lo : hi) = mid;
            }
            double r = 0.5 * (lo + hi);
            double t = std::sqrt(r * r + x * r);
            ChartPoint cp = to_chart(chart, evaluate(u6, t, r));
            table.G[i * table.nv + j] = cp.G;
            table.H[i * table.nv + j] = cp.H;
        }
    }

    ReconstructionProblem prob(chart, table);
    prob.seed_t = 2.0;
    prob.seed_r = 0.6;
    prob.seed_u = evaluate(u6, 2.0, 0.6).u;
    prob.grid = {1.8, 2.2, 9, 0.45, 0.75, 9};
    prob.opts.consistency_tol = 1e-6; // interpolation noise sits above closed-form level
    ReconstructedField f = reconstruct(prob);
    double worst = 0;
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            double want = evaluate(u6, f.ts[i], f.rs[j]).u;
            worst = std::max(worst, std::abs(f.at(i, j) - want) / std::max(1.0, want));
        }
    CHECK(worst < 1e-6);
}
