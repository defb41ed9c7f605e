#pragma once

// Rebuild u(t,r) from explicit (G,H) chart solutions by integrating the
// parametric characteristic ODEs along axis-parallel paths (the one-to-many
// inverse mapping of the group foliation).

#include <functional>
#include <vector>

#include "radialwave/core.hpp"
#include "radialwave/foliation.hpp"

namespace radialwave {

/// (G, H) values at a chart point; closed-form solutions or tabulated data.
using GHValueFn = std::function<std::pair<double, double>(double x, double v)>;

GHValueFn gh_value_fn(const GHSolution& sol);

struct ReconstructGrid {
    double t0 = 1.0, t1 = 2.0;
    int nt = 11;
    double r0 = 0.5, r1 = 1.5;
    int nr = 11;
};

struct ReconstructOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double min_step = 1e-12;       // below this, PathSingular
    double consistency_frac = 0.1; // fraction of nodes checked by the swapped path order
    double consistency_tol = 1e-8; // CompatibilityError beyond this
    bool check_consistency = true;
};

struct ReconstructionProblem {
    FoliationChart chart;
    GHValueFn gh;
    double seed_t = 1.0, seed_r = 1.0, seed_u = 1.0;
    ReconstructGrid grid;
    ReconstructOptions opts;

    ReconstructionProblem(FoliationChart chart_, GHValueFn gh_)
        : chart(std::move(chart_)), gh(std::move(gh_)) {}
};

struct ReconstructedField {
    std::vector<double> ts, rs;
    std::vector<std::vector<double>> u; // u[i][j] at (ts[i], rs[j])
    double max_residual = 0;            // PDE residual by high-order finite differences
    int residual_points = 0;
    double max_path_mismatch = 0; // t-first vs r-first on the checked subsample
    int consistency_points = 0;

    double at(int i, int j) const { return u[i][j]; }
};

/// Integrate u_t and u_r characteristic ODEs from the seed over the grid.
/// Throws PathSingular when a path cannot continue and CompatibilityError
/// when the two path orders disagree beyond tolerance.
ReconstructedField reconstruct(const ReconstructionProblem& problem);

struct SweepMember {
    double constant = 0; // the seed value u0 (the reconstruction's free constant)
    double max_residual = 0;
};

struct SweepReport {
    std::vector<SweepMember> members;
    double min_pairwise_distance = 0; // max-norm distance between member fields
    bool pairwise_distinct = false;
    bool all_pass = false;
};

/// One reconstruction per integration constant (seed value); verifies the
/// family is pairwise distinct and every member passes the residual check.
SweepReport constant_sweep(const ReconstructionProblem& problem,
                           const std::vector<double>& constants, double residual_tol = 1e-6);

} // namespace radialwave
