#pragma once

// The four group-resolving first-order PDE systems (scaling, translation,
// conformal, translation+inversion), their invariant charts, the explicit
// (G,H) solution families of Propositions 5-8, and the conservation-law /
// potential machinery.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "radialwave/catalog.hpp"
#include "radialwave/core.hpp"
#include "radialwave/jet.hpp"

namespace radialwave {

enum class ChartKind { Scaling, Translation, Conformal, TransInversion };
const char* chart_name(ChartKind kind);

struct FoliationChart {
    ChartKind kind = ChartKind::Scaling;
    ModelParams params;

    FoliationChart(ChartKind kind_, ModelParams params_);
};

struct ChartPoint {
    double x = 0, v = 0, G = 0, H = 0;
};

/// Invariants and differential invariants at a jet point.  DomainError at
/// r = 0 and chart-singular loci.
ChartPoint to_chart(const FoliationChart& chart, const Jet2Sample& jet);

/// Inverse maps: recover (u_t, u_r) from (G, H) at a space-time point.
std::pair<double, double> chart_invert(const FoliationChart& chart, double t, double r,
                                       double u, double G, double H);

// --- explicit (G,H) solutions ----------------------------------------------

enum class GHSolutionId { S1, S2, S3, S4, C1, PTrans, PScal, PInver, PTi1, PTi2 };
const char* gh_name(GHSolutionId id);
std::optional<GHSolutionId> gh_from_name(const std::string& name);
std::vector<GHSolutionId> all_gh_solutions();
ChartKind chart_of(GHSolutionId id);

struct GHSolution {
    GHSolutionId id = GHSolutionId::S1;
    ModelParams params;
    int branch = +1;
    bool as_printed = false; // PTi1/PTi2: the paper's (typo) forms, for negative tests
};

/// Parameter side conditions (e.g. S2 requires q=(4-n)/(n-2)).
void require_gh_constraints(const GHSolution& sol);
bool gh_constraints_ok(const GHSolution& sol);

struct GHJet {
    double G = 0, Gx = 0, Gv = 0;
    double H = 0, Hx = 0, Hv = 0;
};

/// Closed forms with exact first partials (Taylor arithmetic).  DomainError
/// outside the real-validity domain (radicand <= 0, v <= 0, ...).
GHJet eval_gh(const GHSolution& sol, double x, double v);
bool gh_valid(const GHSolution& sol, double x, double v);

/// Residuals of the chart's two resolving PDEs for arbitrary (G,H) jets.
std::pair<double, double> resolving_residual_at(const FoliationChart& chart,
                                                const GHJet& gh, double x, double v);

struct GridSpec {
    double x0 = 0.25, x1 = 4.0;
    double v0 = 0.25, v1 = 4.0;
    int nx = 20, nv = 20;
};

/// Admissible default grid for a solution (radicand margins respected).
GridSpec default_grid(const GHSolution& sol);

struct ResolvingReport {
    double max_residual = 0;
    int evaluated = 0;
    int skipped = 0; // outside the validity domain
    bool pass = false;
    double tol = 0;
};

ResolvingReport resolving_residual(const GHSolution& sol, const GridSpec& grid,
                                   double tol = 1e-9);
ResolvingReport resolving_residual(const GHSolution& sol,
                                   std::span<const std::pair<double, double>> points,
                                   double tol = 1e-9);

// --- potentials / conservation laws ------------------------------------------

enum class PotentialId { PhiTrans, PsiTrans, PsiScal, PsiInver, PsiTi1, PsiTi2 };
const char* potential_name(PotentialId id);
std::vector<PotentialId> all_potentials();
/// The GH solution each potential induces.
GHSolutionId induced_gh(PotentialId id);
ChartKind chart_of(PotentialId id);

struct PotentialSolution {
    PotentialId id = PotentialId::PhiTrans;
    ModelParams params;
    int branch = +1;
};

struct PotentialJet {
    double value = 0, d_x = 0, d_v = 0;
};
PotentialJet eval_potential(const PotentialSolution& pot, double x, double v);

struct PotentialCheckReport {
    double max_gradient_mismatch = 0;  // potential partials vs declared fluxes
    double max_curl = 0;               // mixed-partial symmetry of the fluxes
    double max_induced_mismatch = 0;   // induced (G,H) vs declared closed form
    double max_resolving_residual = 0; // induced (G,H) in the resolving system
    int evaluated = 0;
    int skipped = 0;
    bool pass = false;
};

PotentialCheckReport potential_check(const PotentialSolution& pot, const GridSpec& grid,
                                     double grad_tol = 1e-9, double curl_tol = 1e-9,
                                     double induced_tol = 1e-10);

// --- the ansatz case replay ---------------------------------------------------

enum class AnsatzCase { HalfQPlusOne, Q };

struct AnsatzReport {
    AnsatzCase which = AnsatzCase::HalfQPlusOne;
    bool has_solution = false;
    double g = 0, h = 0;          // the unique branch pair when it exists (g = +root)
    std::string narrative;        // the replayed overdetermined algebra
    bool n_equals_one_hint = false;
};

/// Replays the paper's overdetermined algebra for the separation ansatz
/// G = g(x) v^a, H = h(x) v^b on the scaling-group resolving system.
AnsatzReport ansatz_coefficient_check(AnsatzCase which, int n, double q, int k);

nlohmann::json resolving_report_json(const GHSolution& sol, const GridSpec& grid,
                                     const ResolvingReport& rep);

} // namespace radialwave
