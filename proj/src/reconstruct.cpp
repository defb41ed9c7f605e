#include "radialwave/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace radialwave {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 1>;

struct Rhs {
    const FoliationChart* chart;
    const GHValueFn* gh;
    double fixed; // the frozen coordinate
    bool along_t; // integrate in t (fixed r) or in r (fixed t)

    void operator()(const State& y, State& dydt, double s) const {
        double t = along_t ? s : fixed;
        double r = along_t ? fixed : s;
        if (r <= 0) throw DomainError("reconstruct: r <= 0 on path");
        double u = y[0];
        const double p = exponent_p(chart->params);
        double x, v;
        switch (chart->kind) {
            case ChartKind::Scaling:
                x = t / r;
                v = real_pow(r, -p) * u;
                break;
            case ChartKind::Translation:
                x = r;
                v = u;
                break;
            case ChartKind::Conformal:
            case ChartKind::TransInversion: {
                double a = chart->kind == ChartKind::TransInversion ? 1.0 : 0.0;
                x = (a + t * t - r * r) / r;
                v = real_pow(r, -p) * u;
                break;
            }
            default:
                throw DomainError("unknown chart");
        }
        auto [G, H] = (*gh)(x, v);
        auto [ut, ur] = chart_invert(*chart, t, r, u, G, H);
        dydt[0] = along_t ? ut : ur;
    }
};

/// Adaptive RKCK from s0 to s1; PathSingular on step collapse or domain exits.
double integrate_1d(const FoliationChart& chart, const GHValueFn& gh, double fixed,
                    bool along_t, double u0, double s0, double s1,
                    const ReconstructOptions& opts) {
    if (s0 == s1) return u0;
    Rhs rhs{&chart, &gh, fixed, along_t};
    auto stepper = ode::make_controlled<ode::runge_kutta_cash_karp54<State>>(opts.abs_tol,
                                                                             opts.rel_tol);
    State y{u0};
    double s = s0;
    double dir = s1 > s0 ? 1.0 : -1.0;
    double dt = dir * std::min(0.05, std::abs(s1 - s0));
    int guard = 0;
    try {
        while (dir * (s1 - s) > 1e-15) {
            if (dir * (s + dt) > dir * s1) dt = s1 - s;
            ode::controlled_step_result res = stepper.try_step(rhs, y, s, dt);
            if (res == ode::fail) {
                if (std::abs(dt) < opts.min_step)
                    throw PathSingular("reconstruct: step size collapsed");
            }
            if (++guard > 2000000) throw PathSingular("reconstruct: too many steps");
            if (!std::isfinite(y[0])) throw PathSingular("reconstruct: field blew up on path");
        }
    } catch (const DomainError& e) {
        throw PathSingular(std::string("reconstruct: path crossed a singular locus: ") +
                           e.what());
    }
    return y[0];
}

} // namespace

GHValueFn gh_value_fn(const GHSolution& sol) {
    require_gh_constraints(sol);
    return [sol](double x, double v) {
        GHJet j = eval_gh(sol, x, v);
        return std::make_pair(j.G, j.H);
    };
}

ReconstructedField reconstruct(const ReconstructionProblem& prob) {
    const auto& g = prob.grid;
    if (g.nt < 2 || g.nr < 2) throw ConfigError("reconstruct: grid needs nt, nr >= 2");
    ReconstructedField out;
    out.ts.resize(g.nt);
    out.rs.resize(g.nr);
    for (int i = 0; i < g.nt; ++i) out.ts[i] = g.t0 + (g.t1 - g.t0) * i / (g.nt - 1);
    for (int j = 0; j < g.nr; ++j) out.rs[j] = g.r0 + (g.r1 - g.r0) * j / (g.nr - 1);
    out.u.assign(g.nt, std::vector<double>(g.nr, 0.0));

    // seed column: integrate along t at r = seed_r
    std::vector<double> col(g.nt);
    {
        // march away from the seed incrementally in both directions
        std::vector<int> order(g.nt);
        for (int i = 0; i < g.nt; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(out.ts[a] - prob.seed_t) < std::abs(out.ts[b] - prob.seed_t);
        });
        double up_u = prob.seed_u, up_t = prob.seed_t;
        double dn_u = prob.seed_u, dn_t = prob.seed_t;
        for (int idx : order) {
            double t = out.ts[idx];
            if (t >= prob.seed_t) {
                up_u = integrate_1d(prob.chart, prob.gh, prob.seed_r, true, up_u, up_t, t,
                                    prob.opts);
                up_t = t;
                col[idx] = up_u;
            } else {
                dn_u = integrate_1d(prob.chart, prob.gh, prob.seed_r, true, dn_u, dn_t, t,
                                    prob.opts);
                dn_t = t;
                col[idx] = dn_u;
            }
        }
    }

    // rows: integrate along r from the seed column
    for (int i = 0; i < g.nt; ++i) {
        double t = out.ts[i];
        // right of seed_r
        double u = col[i], rcur = prob.seed_r;
        std::vector<std::pair<int, double>> right, left;
        for (int j = 0; j < g.nr; ++j)
            (out.rs[j] >= prob.seed_r ? right : left).emplace_back(j, out.rs[j]);
        std::sort(right.begin(), right.end(),
                  [](auto a, auto b) { return a.second < b.second; });
        std::sort(left.begin(), left.end(),
                  [](auto a, auto b) { return a.second > b.second; });
        for (auto [j, r] : right) {
            u = integrate_1d(prob.chart, prob.gh, t, false, u, rcur, r, prob.opts);
            rcur = r;
            out.u[i][j] = u;
        }
        u = col[i];
        rcur = prob.seed_r;
        for (auto [j, r] : left) {
            u = integrate_1d(prob.chart, prob.gh, t, false, u, rcur, r, prob.opts);
            rcur = r;
            out.u[i][j] = u;
        }
    }

    // path-order consistency on a subsample: seed -> (seed_t, r_j) -> (t_i, r_j)
    if (prob.opts.check_consistency) {
        int stride = std::max(1, int(1.0 / std::max(1e-6, prob.opts.consistency_frac)));
        int counter = 0;
        for (int i = 0; i < g.nt; ++i)
            for (int j = 0; j < g.nr; ++j) {
                if (++counter % stride) continue;
                double u_alt = integrate_1d(prob.chart, prob.gh, prob.seed_t, false,
                                            prob.seed_u, prob.seed_r, out.rs[j], prob.opts);
                u_alt = integrate_1d(prob.chart, prob.gh, out.rs[j], true, u_alt, prob.seed_t,
                                     out.ts[i], prob.opts);
                double scale = std::max(1.0, std::abs(out.u[i][j]));
                double mism = std::abs(u_alt - out.u[i][j]) / scale;
                out.max_path_mismatch = std::max(out.max_path_mismatch, mism);
                ++out.consistency_points;
            }
        if (out.max_path_mismatch > prob.opts.consistency_tol)
            throw CompatibilityError("reconstruct: t-first and r-first integrations disagree "
                                     "(invalid (G,H) pair)");
    }

    // PDE residual of the reconstructed field by 4th-order central differences
    const double dt = (g.t1 - g.t0) / (g.nt - 1);
    const double dr = (g.r1 - g.r0) / (g.nr - 1);
    const auto& U = out.u;
    auto d2 = [](double m2, double m1, double c, double p1, double p2, double h) {
        return (-m2 + 16 * m1 - 30 * c + 16 * p1 - p2) / (12 * h * h);
    };
    auto d1 = [](double m2, double m1, double p1, double p2, double h) {
        return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
    };
    const auto& par = prob.chart.params;
    for (int i = 2; i + 2 < g.nt; ++i)
        for (int j = 2; j + 2 < g.nr; ++j) {
            double utt = d2(U[i - 2][j], U[i - 1][j], U[i][j], U[i + 1][j], U[i + 2][j], dt);
            double urr = d2(U[i][j - 2], U[i][j - 1], U[i][j], U[i][j + 1], U[i][j + 2], dr);
            double ur = d1(U[i][j - 2], U[i][j - 1], U[i][j + 1], U[i][j + 2], dr);
            double uq;
            try {
                uq = real_pow(U[i][j], par.q);
            } catch (const DomainError&) {
                continue;
            }
            double res = std::abs(utt - urr - (par.n - 1) / out.rs[j] * ur - par.k * uq) /
                         std::max(1.0, std::abs(par.k * uq));
            out.max_residual = std::max(out.max_residual, res);
            ++out.residual_points;
        }
    return out;
}

SweepReport constant_sweep(const ReconstructionProblem& prob,
                           const std::vector<double>& constants, double residual_tol) {
    SweepReport rep;
    std::vector<ReconstructedField> fields;
    for (double u0 : constants) {
        ReconstructionProblem p = prob;
        p.seed_u = u0;
        ReconstructedField f = reconstruct(p);
        rep.members.push_back({u0, f.max_residual});
        fields.push_back(std::move(f));
    }
    rep.min_pairwise_distance = std::numeric_limits<double>::infinity();
    for (size_t a = 0; a < fields.size(); ++a)
        for (size_t b = a + 1; b < fields.size(); ++b) {
            double d = 0;
            for (size_t i = 0; i < fields[a].u.size(); ++i)
                for (size_t j = 0; j < fields[a].u[i].size(); ++j)
                    d = std::max(d, std::abs(fields[a].u[i][j] - fields[b].u[i][j]));
            rep.min_pairwise_distance = std::min(rep.min_pairwise_distance, d);
        }
    if (fields.size() < 2) rep.min_pairwise_distance = 0;
    rep.pairwise_distinct = fields.size() < 2 || rep.min_pairwise_distance > 1e-8;
    rep.all_pass = std::all_of(rep.members.begin(), rep.members.end(),
                               [&](const SweepMember& m) { return m.max_residual < residual_tol; });
    return rep;
}

} // namespace radialwave
