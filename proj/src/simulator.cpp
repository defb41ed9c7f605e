#include "radialwave/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace radialwave {

namespace {

double nonlinearity(double u, const SimConfig& cfg) {
    if (cfg.disable_nonlinearity) return 0.0;
    const double q = cfg.params.q;
    long long qi;
    if (nearly_integer(q, qi)) return cfg.params.k * real_pow(u, q);
    if (u <= 0) {
        if (cfg.nonlin == NonlinMode::SignPreserving)
            return cfg.params.k * (u == 0 ? 0.0 : std::copysign(std::pow(std::abs(u), q), u));
        if (cfg.floor_clamp) return cfg.params.k * std::pow(cfg.floor_value, q);
        throw DomainError("nonlinearity: u <= 0 under non-integer q");
    }
    if (cfg.nonlin == NonlinMode::SignPreserving) return cfg.params.k * std::pow(u, q);
    return cfg.params.k * std::pow(u, q);
}

/// Spatial operator u_rr + (n-1)u_r/r, regularized at the axis.
double spatial_op(const std::vector<double>& u, int i, const SimConfig& cfg) {
    const int n = cfg.params.n;
    const double dr = cfg.dr();
    const int N = cfg.N;
    if (i == 0) {
        // even symmetry ghost u_{-1} = u_1 and the L'Hopital limit:
        // u_tt = n u_rr + k u^q at r = 0
        return n * 2.0 * (u[1] - u[0]) / (dr * dr);
    }
    double urr = (u[i + 1] - 2 * u[i] + u[i - 1]) / (dr * dr);
    double ur;
    if (cfg.first_order_fixture) ur = (u[i] - u[i - 1]) / dr; // negative control: order 1
    else ur = (u[i + 1] - u[i - 1]) / (2 * dr);
    double r = i * dr;
    (void)N;
    return urr + (n - 1) / r * ur;
}

std::pair<std::vector<double>, std::vector<double>> exact_slice(const SolutionFamily& fam,
                                                                double t, int N, double dr) {
    std::vector<double> u(N + 1), ut(N + 1);
    EvalOptions opts;
    opts.singular_guard = 0;
    for (int i = 0; i <= N; ++i) {
        double r = std::max(i * dr, 1e-12); // jets are regular in the closed forms used
        Jet2Sample s = evaluate(fam, t, r, opts);
        u[i] = s.u;
        ut[i] = s.u_t;
    }
    return {u, ut};
}

} // namespace

void validate(const SimConfig& cfg) {
    if (cfg.N < 16) throw ConfigError("SimConfig: N >= 16 required");
    if (!(cfg.cfl > 0 && cfg.cfl < 1)) throw ConfigError("SimConfig: CFL must be in (0,1)");
    if (cfg.r_max <= 0) throw ConfigError("SimConfig: r_max must be positive");
    if (cfg.t_end <= cfg.t0) throw ConfigError("SimConfig: t_end must exceed t0");
    if (!cfg.exact && !cfg.init) throw ConfigError("SimConfig: initial data source missing");
    if (cfg.boundary == BoundaryKind::DirichletExact && !cfg.exact)
        throw ConfigError("SimConfig: Dirichlet-from-exact needs an exact family");
    if (cfg.exact) require_constraints(*cfg.exact);
    if (cfg.blowup_threshold <= 1) throw ConfigError("SimConfig: blow-up threshold too small");
}

SimState init_state(const SimConfig& cfg) {
    validate(cfg);
    SimState st;
    const int N = cfg.N;
    const double dr = cfg.dr();
    const double dt = cfg.dt();
    st.r.resize(N + 1);
    for (int i = 0; i <= N; ++i) st.r[i] = i * dr;

    std::vector<double> u0, ut0;
    if (cfg.exact) {
        auto [u, ut] = exact_slice(*cfg.exact, cfg.t0, N, dr);
        u0 = std::move(u);
        ut0 = std::move(ut);
    } else {
        if (int(cfg.init->u.size()) != N + 1 || int(cfg.init->ut.size()) != N + 1)
            throw ConfigError("initial data size does not match the grid");
        u0 = cfg.init->u;
        ut0 = cfg.init->ut;
    }

    // RK2 (midpoint) bootstrap for the first level:
    // u^1 = u^0 + dt ut^0 + dt^2/2 (L u^0 + k (u^0)^q)
    std::vector<double> u1(N + 1);
    try {
        for (int i = 0; i < N; ++i)
            u1[i] = u0[i] + dt * ut0[i] +
                    0.5 * dt * dt * (spatial_op(u0, i, cfg) + nonlinearity(u0[i], cfg));
        if (cfg.boundary == BoundaryKind::DirichletExact) {
            u1[N] = exact_slice(*cfg.exact, cfg.t0 + dt, 1, cfg.r_max).first[1];
        } else {
            u1[N] = u0[N] + dt * ut0[N];
        }
    } catch (const DomainError& e) {
        st.status = SimStatus::DomainErrorStop;
        st.stop_reason = e.what();
        u1 = u0;
    }

    st.u_prev = std::move(u0);
    st.u_curr = std::move(u1);
    st.time = cfg.t0 + dt;
    st.step_count = 1;
    st.axis_history.emplace_back(cfg.t0, st.u_prev[0]);
    st.axis_history.emplace_back(st.time, st.u_curr[0]);
    return st;
}

void step(SimState& st, const SimConfig& cfg) {
    if (st.status != SimStatus::Running) return;
    const int N = cfg.N;
    const double dt = cfg.dt();
    const double dr = cfg.dr();
    std::vector<double> unew(N + 1);
    try {
        for (int i = 0; i < N; ++i) {
            double rhs = spatial_op(st.u_curr, i, cfg) + nonlinearity(st.u_curr[i], cfg);
            unew[i] = 2 * st.u_curr[i] - st.u_prev[i] + dt * dt * rhs;
        }
        if (cfg.boundary == BoundaryKind::DirichletExact) {
            unew[N] = exact_slice(*cfg.exact, st.time + dt, 1, cfg.r_max).first[1];
        } else {
            // Sommerfeld outgoing: u_t + u_r + (n-1) u/(2r) = 0, first-order upwind
            double ur = (st.u_curr[N] - st.u_curr[N - 1]) / dr;
            double damp = (cfg.params.n - 1) * st.u_curr[N] / (2 * st.r[N]);
            unew[N] = st.u_curr[N] - dt * (ur + damp);
        }
    } catch (const DomainError& e) {
        st.status = SimStatus::DomainErrorStop;
        st.stop_reason = e.what();
        return;
    }
    st.u_prev = std::move(st.u_curr);
    st.u_curr = std::move(unew);
    st.time += dt;
    ++st.step_count;
    st.axis_history.emplace_back(st.time, st.u_curr[0]);

    double umax = 0;
    for (double v : st.u_curr) {
        if (!std::isfinite(v)) {
            umax = std::numeric_limits<double>::infinity();
            break;
        }
        umax = std::max(umax, std::abs(v));
    }
    if (umax > cfg.blowup_threshold) {
        st.status = SimStatus::Blowup;
        st.t_blowup = st.time;
    }
}

double energy_of_state(const SimState& st, const SimConfig& cfg) {
    const int N = cfg.N;
    const double dr = cfg.dr();
    const double dt = cfg.dt();
    const double q = cfg.params.q;
    const int n = cfg.params.n;
    // evaluated at the half step t - dt/2 with centered u_t and averaged u
    auto ubar = [&](int i) { return 0.5 * (st.u_curr[i] + st.u_prev[i]); };
    auto integrand = [&](int i) {
        double ut = (st.u_curr[i] - st.u_prev[i]) / dt;
        double ur;
        if (i == 0) ur = 0.0; // even symmetry
        else if (i == N) ur = (ubar(N) - ubar(N - 1)) / dr;
        else ur = (ubar(i + 1) - ubar(i - 1)) / (2 * dr);
        double u = ubar(i);
        double pot = 0;
        if (!cfg.disable_nonlinearity) {
            long long qi;
            double up1;
            if (nearly_integer(q + 1, qi)) up1 = real_pow(u, q + 1);
            else up1 = u > 0 ? std::pow(u, q + 1) : 0.0;
            pot = cfg.params.k * up1 / (q + 1);
        }
        double w = 0.5 * ut * ut + 0.5 * ur * ur - pot;
        return w * real_pow(st.r[i], double(n - 1));
    };
    // Simpson over the grid; trapezoid on the last cell when N is odd
    double acc = 0;
    int M = N % 2 == 0 ? N : N - 1;
    acc = integrand(0) + integrand(M);
    for (int i = 1; i < M; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i);
    double E = acc * dr / 3.0;
    if (M != N) E += 0.5 * dr * (integrand(N - 1) + integrand(N));
    return E;
}

ErrorNorms error_vs_exact(const SimState& st, const SimConfig& cfg,
                          const SolutionFamily& exact) {
    auto [ue, ute] = exact_slice(exact, st.time, cfg.N, cfg.dr());
    ErrorNorms e;
    double acc = 0;
    for (int i = 0; i <= cfg.N; ++i) {
        double d = st.u_curr[i] - ue[i];
        acc += d * d;
        e.linf = std::max(e.linf, std::abs(d));
    }
    e.l2 = std::sqrt(acc * cfg.dr());
    return e;
}

SimState run(const SimConfig& cfg) {
    SimState st = init_state(cfg);
    st.energy_history.emplace_back(st.time - 0.5 * cfg.dt(), energy_of_state(st, cfg));
    double next_snap = cfg.t_snap_stride ? cfg.t0 : std::numeric_limits<double>::infinity();
    long stride_count = 0;
    while (st.status == SimStatus::Running && st.time < cfg.t_end - 1e-12) {
        step(st, cfg);
        ++stride_count;
        if (st.status == SimStatus::Running &&
            stride_count % std::max(1, cfg.energy_stride) == 0)
            st.energy_history.emplace_back(st.time - 0.5 * cfg.dt(),
                                           energy_of_state(st, cfg));
        if (cfg.t_snap_stride && st.time >= next_snap) {
            st.snapshots.emplace_back(st.time, st.u_curr);
            next_snap += *cfg.t_snap_stride;
        }
    }
    if (st.status == SimStatus::Running) st.status = SimStatus::Completed;
    return st;
}

ConvergenceReport run_convergence(const SimConfig& base, std::span<const int> resolutions,
                                  const SolutionFamily& exact) {
    ConvergenceReport rep;
    for (int N : resolutions) {
        SimConfig cfg = base;
        cfg.N = N;
        cfg.exact = exact;
        SimState st = run(cfg);
        if (st.status != SimStatus::Completed)
            throw DomainError("convergence run did not complete");
        ErrorNorms e = error_vs_exact(st, cfg, exact);
        rep.resolutions.push_back(N);
        rep.l2.push_back(e.l2);
        rep.linf.push_back(e.linf);
    }
    // least squares slope of log(err) vs log(N); order = -slope
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = int(rep.resolutions.size());
    for (int i = 0; i < m; ++i) {
        double x = std::log(double(rep.resolutions[i]));
        double y = std::log(std::max(rep.linf[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.fitted_order = -slope;
    return rep;
}

BlowupFit fit_blowup_rate(std::span<const std::pair<double, double>> axis_samples,
                          double t_b, int n, double dt_hint, const BlowupFitOptions& opts) {
    // collect the window
    std::vector<std::pair<double, double>> win;
    double t_cut = t_b - opts.exclude_last_steps * dt_hint;
    for (auto [t, u] : axis_samples) {
        if (t >= t_cut) continue;
        if (!(u >= opts.u_min && u <= opts.u_max)) continue;
        win.emplace_back(t, u);
    }
    if (win.size() < 10)
        throw InsufficientWindow("blow-up fit: fewer than 10 usable samples in the window");

    auto fit_at = [&](double tb, double& slope, double& intercept) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (auto [t, u] : win) {
            if (tb - t <= 0) continue;
            double x = std::log(tb - t);
            double y = std::log(u);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
        if (m < 10) return std::numeric_limits<double>::infinity();
        slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        intercept = (sy - slope * sx) / m;
        double rms = 0;
        for (auto [t, u] : win) {
            if (tb - t <= 0) continue;
            double d = std::log(u) - (slope * std::log(tb - t) + intercept);
            rms += d * d;
        }
        return std::sqrt(rms / m);
    };

    double slope = 0, intercept = 0;
    double best_tb = t_b;
    double best_rms = fit_at(t_b, slope, intercept);
    if (opts.refine_t_b) {
        // golden-section search for the t_b minimizing the fit RMS
        double a = t_b - 10 * dt_hint, b = t_b + 10 * dt_hint;
        const double gr = 0.5 * (std::sqrt(5.0) - 1);
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double s, ic;
        double fc = fit_at(c, s, ic), fd = fit_at(d, s, ic);
        for (int it = 0; it < 60; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = fit_at(c, s, ic);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = fit_at(d, s, ic);
            }
        }
        double tb_opt = 0.5 * (a + b);
        double rms_opt = fit_at(tb_opt, slope, intercept);
        if (rms_opt < best_rms) {
            best_rms = rms_opt;
            best_tb = tb_opt;
        }
    }
    best_rms = fit_at(best_tb, slope, intercept);

    BlowupFit fit;
    fit.exponent = slope;
    fit.amplitude = std::exp(intercept);
    fit.t_b = best_tb;
    fit.fit_rms = best_rms;
    fit.samples = int(win.size());
    fit.reference = 0.5 * (1 - n);
    return fit;
}

BlowupFit fit_blowup_rate(const SimState& st, const SimConfig& cfg,
                          const BlowupFitOptions& opts) {
    if (st.status != SimStatus::Blowup)
        throw DomainError("fit_blowup_rate: run did not end in blow-up");
    return fit_blowup_rate(st.axis_history, st.t_blowup, cfg.params.n, cfg.dt(), opts);
}

} // namespace radialwave
