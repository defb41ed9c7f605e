#pragma once

// CSV and JSON-config plumbing: initial-data files, field/energy/convergence
// CSV emitters (17 significant digits), and the versioned run-config schema.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "radialwave/simulator.hpp"

namespace radialwave {

/// Initial data CSV: header line `t0,n,q,k`, one value row, then `r,u,ut` rows.
void write_initial_data_csv(std::ostream& os, const SimConfig& cfg, const InitialData& data);
struct InitialDataFile {
    ModelParams params;
    InitialData data;
};
InitialDataFile read_initial_data_csv(std::istream& is);

/// Output CSV `t,r,u` for snapshots.
void write_field_csv(std::ostream& os, const SimState& state);
/// Energy CSV `t,E`.
void write_energy_csv(std::ostream& os, const SimState& state);
/// Convergence CSV `N,L2,Linf`.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& rep);
/// Quadrature table CSV `v,x`.
void write_quadrature_csv(std::ostream& os,
                          const std::vector<std::pair<double, double>>& rows);

std::string format_g17(double v);

/// Versioned JSON run-config: {"schema":1, ...}; unknown keys are rejected.
/// Flags later override these values in the CLI layer.
struct RunFileConfig {
    int n = 3;
    double q = 3;
    int k = 1;
    std::string family;
    double c = 0, c_tilde = 0;
    int branch = 1;
    double t0 = 1, t_end = 3;
    double r_max = 8;
    int N = 256;
    double cfl = 0.5;
    std::string boundary = "dirichlet-exact";
    double blowup_threshold = 1e8;
    int energy_stride = 1;
    unsigned long long seed = 0;
};

RunFileConfig parse_run_config(const nlohmann::json& j);

} // namespace radialwave
