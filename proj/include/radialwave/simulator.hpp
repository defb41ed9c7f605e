#pragma once

// Method-of-lines leapfrog solver for the radial wave equation with r=0
// regularization, energy tracking, blow-up detection and rate fitting.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "radialwave/catalog.hpp"
#include "radialwave/core.hpp"

namespace radialwave {

enum class BoundaryKind { DirichletExact, SommerfeldOutgoing };
enum class NonlinMode { PowerReal, SignPreserving };

struct InitialData {
    double t0 = 0;
    std::vector<double> u, ut; // on the grid r_i = i*dr
};

struct SimConfig {
    ModelParams params;
    double r_max = 4.0;
    int N = 256;      // grid intervals; points are 0..N
    double cfl = 0.5; // dt = cfl * dr / sqrt(n)  (axis regularization margin)
    double t0 = 0.0;
    double t_end = 1.0;
    BoundaryKind boundary = BoundaryKind::DirichletExact;
    std::optional<SolutionFamily> exact; // initial data + Dirichlet trace + errors
    std::optional<InitialData> init;     // alternative: tabulated initial data
    double blowup_threshold = 1e8;
    int energy_stride = 1;
    NonlinMode nonlin = NonlinMode::PowerReal;
    bool disable_nonlinearity = false; // linear test mode
    bool floor_clamp = false;          // clamp u below floor_value instead of erroring
    double floor_value = 1e-12;
    bool first_order_fixture = false;  // test fixture: first-order upwind u_r term
    std::optional<double> t_snap_stride; // field snapshot cadence

    double dr() const { return r_max / N; }
    double dt() const { return cfl * dr() / std::sqrt(double(params.n)); }
};

void validate(const SimConfig& config);

enum class SimStatus { Running, Completed, Blowup, DomainErrorStop };

struct SimState {
    std::vector<double> r;
    std::vector<double> u_prev, u_curr; // time levels m-1 and m
    double time = 0;                    // time of u_curr
    long step_count = 0;
    SimStatus status = SimStatus::Running;
    double t_blowup = 0;
    std::vector<std::pair<double, double>> energy_history; // (t, E) at half steps
    std::vector<std::pair<double, double>> axis_history;   // (t, u(r=0))
    std::vector<std::pair<double, std::vector<double>>> snapshots;
    std::string stop_reason;
};

SimState init_state(const SimConfig& config);
void step(SimState& state, const SimConfig& config);
SimState run(const SimConfig& config);

/// Composite Simpson of (u_t^2/2 + u_r^2/2 - k u^{q+1}/(q+1)) r^{n-1} with
/// u_t, u_r from centered differences of the two stored levels (evaluated at
/// the half step).
double energy_of_state(const SimState& state, const SimConfig& config);

struct ErrorNorms {
    double l2 = 0, linf = 0;
};
/// Errors of u_curr against the exact family at state.time.
ErrorNorms error_vs_exact(const SimState& state, const SimConfig& config,
                          const SolutionFamily& exact);

struct ConvergenceReport {
    std::vector<int> resolutions;
    std::vector<double> l2, linf;
    double fitted_order = 0; // least squares on log(error) vs log(N), L-inf based
};

ConvergenceReport run_convergence(const SimConfig& base, std::span<const int> resolutions,
                                  const SolutionFamily& exact);

struct BlowupFit {
    double exponent = 0;
    double amplitude = 0;
    double t_b = 0;       // blow-up time used in the fit
    double fit_rms = 0;
    int samples = 0;
    double reference = 0; // (1-n)/2
};

struct BlowupFitOptions {
    double u_min = 10.0;   // fit window: samples with u_min <= u <= u_max
    double u_max = 1e4;
    int exclude_last_steps = 3;
    bool refine_t_b = true; // minimize fit RMS over t_b near the detected time
};

/// Least-squares fit of log u vs log|t - t_b| on (t, u(t, r=0)) samples.
BlowupFit fit_blowup_rate(std::span<const std::pair<double, double>> axis_samples,
                          double t_b, int n, double dt_hint,
                          const BlowupFitOptions& opts = {});

/// Convenience: fit on a finished blow-up run.
BlowupFit fit_blowup_rate(const SimState& state, const SimConfig& config,
                          const BlowupFitOptions& opts = {});

} // namespace radialwave
