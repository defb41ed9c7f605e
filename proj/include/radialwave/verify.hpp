#pragma once

// Shipped verification suites: the parameter instantiations of every closed
// form together with suite runners over the residual oracles.  Used by the
// CLI `verify` command and by the acceptance tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "radialwave/catalog.hpp"
#include "radialwave/foliation.hpp"

namespace radialwave {

/// Three parameter instantiations per catalog family (45 total).
std::vector<SolutionFamily> standard_instantiations();
/// Instantiations of the ten (G,H) resolving-system solutions.
std::vector<GHSolution> standard_gh_instantiations();

struct SuiteResult {
    std::string name;
    bool pass = false;
    nlohmann::json details;
};

/// Catalog PDE residuals on sampled interior points.
SuiteResult verify_pde(std::uint64_t seed, int points_per_family, double tol,
                       std::optional<int> n_filter = {},
                       std::optional<FamilyId> family_filter = {});
/// The Eq.-discrepancy adjudication: the corrected static monopole passes,
/// the as-printed variant fails with an O(1) residual.
SuiteResult verify_erratum_as_printed();
/// Exact bracket table, Jacobi identity, closure.
SuiteResult verify_algebra(int n);
/// All (G,H) families against their resolving systems on 20x20 grids.
SuiteResult verify_foliation(double tol = 1e-9);
/// Conservation-law potentials: gradients, curl, induced (G,H).
SuiteResult verify_potentials();
/// Reduced-ODE embeddings, canonical maps, quadrature closed forms,
/// the Proposition-4 witness.
SuiteResult verify_reductions();
/// Group actions map solutions to solutions; involution is an involution.
SuiteResult verify_group_actions(std::uint64_t seed = 0);

/// Runs every suite; `threads` caps concurrency (<=1 means sequential).
std::vector<SuiteResult> verify_all(int threads, std::uint64_t seed = 0);

nlohmann::json suites_to_json(const std::vector<SuiteResult>& suites);

} // namespace radialwave
