#include "radialwave/foliation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace radialwave {

namespace {

bool close(double a, double b) { return std::abs(a - b) < kPowerClassifyTol; }

double chart_p(const FoliationChart& chart) { return exponent_p(chart.params); }

int conformal_weight(ChartKind kind) { // 4a in x^2 + 4a
    return kind == ChartKind::TransInversion ? 1 : 0;
}

} // namespace

const char* chart_name(ChartKind kind) {
    switch (kind) {
        case ChartKind::Scaling: return "scaling";
        case ChartKind::Translation: return "translation";
        case ChartKind::Conformal: return "conformal";
        case ChartKind::TransInversion: return "trans-inversion";
    }
    return "?";
}

FoliationChart::FoliationChart(ChartKind kind_, ModelParams params_)
    : kind(kind_), params(params_) {
    if ((kind == ChartKind::Conformal || kind == ChartKind::TransInversion) &&
        !is_conformal(params))
        throw UnsupportedParams("conformal charts require q = (n+3)/(n-1)");
}

ChartPoint to_chart(const FoliationChart& chart, const Jet2Sample& jet) {
    const double t = jet.t, r = jet.r;
    if (r <= 0) throw DomainError("to_chart: r must be positive");
    const double p = chart_p(chart);
    switch (chart.kind) {
        case ChartKind::Scaling: {
            double rp = real_pow(r, -p);
            return {t / r, rp * jet.u, r * rp * jet.u_t, r * rp * jet.u_r};
        }
        case ChartKind::Translation:
            return {r, jet.u, jet.u_t, jet.u_r};
        case ChartKind::Conformal:
        case ChartKind::TransInversion: {
            double a = conformal_weight(chart.kind);
            double sigma = a + t * t + r * r;
            double s2 = 2 * r * t;
            double rp = real_pow(r, -p);
            double x = (a + t * t - r * r) / r;
            double v = rp * jet.u;
            double G = rp * (sigma * jet.u_t + s2 * jet.u_r - 2 * p * t * jet.u);
            double H = rp * (sigma * jet.u_r + s2 * jet.u_t - p * sigma * jet.u / r);
            return {x, v, G, H};
        }
    }
    throw DomainError("unknown chart");
}

std::pair<double, double> chart_invert(const FoliationChart& chart, double t, double r,
                                       double u, double G, double H) {
    if (r <= 0) throw DomainError("chart_invert: r must be positive");
    const double p = chart_p(chart);
    switch (chart.kind) {
        case ChartKind::Scaling: {
            double rp = real_pow(r, p - 1);
            return {rp * G, rp * H};
        }
        case ChartKind::Translation:
            return {G, H};
        case ChartKind::Conformal:
        case ChartKind::TransInversion: {
            double a = conformal_weight(chart.kind);
            double sigma = a + t * t + r * r;
            double s2 = 2 * r * t;
            double delta = sigma * sigma - s2 * s2; // = r^2 (x^2 + 4a)
            if (std::abs(delta) < 1e-300)
                throw DomainError("chart_invert: singular chart locus");
            double rp = real_pow(r, p);
            double ut = rp / delta * (sigma * G - s2 * H);
            double ur = rp / delta * (sigma * H - s2 * G) + p * u / r;
            return {ut, ur};
        }
    }
    throw DomainError("unknown chart");
}

// --- GH solutions ------------------------------------------------------------

const char* gh_name(GHSolutionId id) {
    switch (id) {
        case GHSolutionId::S1: return "S1";
        case GHSolutionId::S2: return "S2";
        case GHSolutionId::S3: return "S3";
        case GHSolutionId::S4: return "S4";
        case GHSolutionId::C1: return "C1";
        case GHSolutionId::PTrans: return "P-trans";
        case GHSolutionId::PScal: return "P-scal";
        case GHSolutionId::PInver: return "P-inver";
        case GHSolutionId::PTi1: return "P-ti1";
        case GHSolutionId::PTi2: return "P-ti2";
    }
    return "?";
}

std::optional<GHSolutionId> gh_from_name(const std::string& name) {
    std::string s;
    for (char ch : name) s.push_back(static_cast<char>(std::tolower(ch)));
    for (GHSolutionId id : all_gh_solutions()) {
        std::string t = gh_name(id);
        for (char& ch : t) ch = static_cast<char>(std::tolower(ch));
        if (s == t) return id;
    }
    return std::nullopt;
}

std::vector<GHSolutionId> all_gh_solutions() {
    return {GHSolutionId::S1, GHSolutionId::S2, GHSolutionId::S3, GHSolutionId::S4,
            GHSolutionId::C1, GHSolutionId::PTrans, GHSolutionId::PScal,
            GHSolutionId::PInver, GHSolutionId::PTi1, GHSolutionId::PTi2};
}

ChartKind chart_of(GHSolutionId id) {
    switch (id) {
        case GHSolutionId::S1:
        case GHSolutionId::S2:
        case GHSolutionId::S3:
        case GHSolutionId::S4:
        case GHSolutionId::PScal:
            return ChartKind::Scaling;
        case GHSolutionId::PTrans:
            return ChartKind::Translation;
        case GHSolutionId::C1:
        case GHSolutionId::PInver:
            return ChartKind::Conformal;
        case GHSolutionId::PTi1:
        case GHSolutionId::PTi2:
            return ChartKind::TransInversion;
    }
    return ChartKind::Scaling;
}

void require_gh_constraints(const GHSolution& sol) {
    const int n = sol.params.n;
    const double q = sol.params.q;
    const int k = sol.params.k;
    auto fail = [&](const std::string& msg) {
        throw UnsupportedParams(std::string(gh_name(sol.id)) + ": " + msg);
    };
    if (sol.branch != 1 && sol.branch != -1) fail("branch must be +1 or -1");
    switch (sol.id) {
        case GHSolutionId::S1:
            if (close(q, -1.0)) fail("q = -1 excluded");
            if (k / (q + 1.0) <= 0) fail("k/(q+1) must be positive");
            break;
        case GHSolutionId::S2:
            if (n == 2) fail("n = 2 excluded");
            if (!close(q, inverse_dilation_power(n))) fail("requires q = (4-n)/(n-2)");
            if ((2.0 - n) * k <= 0) fail("(2-n)k must be positive");
            break;
        case GHSolutionId::S3:
            if (n == 2 || n == 3) fail("n in {2,3} excluded");
            if (!close(q, static_line_power(n))) fail("requires q = (n-1)/(n-2)");
            break;
        case GHSolutionId::S4:
            if (!close(q, -3.0)) fail("requires q = -3");
            if (k != -1) fail("requires k = -1");
            break;
        case GHSolutionId::C1:
            if (!is_conformal(sol.params)) fail("requires the conformal power");
            if (k != 1) fail("requires k = +1");
            break;
        case GHSolutionId::PTrans: {
            double D = n * (1 - q) + 1 + q;
            if (std::abs(D) < kPowerClassifyTol) fail("n(1-q)+1+q = 0 excluded");
            break;
        }
        case GHSolutionId::PScal:
        case GHSolutionId::PInver:
        case GHSolutionId::PTi1:
            if (!is_conformal(sol.params)) fail("requires the conformal power");
            break;
        case GHSolutionId::PTi2:
            if (!is_conformal(sol.params)) fail("requires the conformal power");
            if (!sol.as_printed && k != 1) fail("requires k = +1 (radicand sign)");
            break;
    }
}

bool gh_constraints_ok(const GHSolution& sol) {
    try {
        require_gh_constraints(sol);
        return true;
    } catch (const UnsupportedParams&) {
        return false;
    }
}

namespace {

/// G and H as jets over (a=x, b=v).
std::pair<Jet2, Jet2> gh_jets(const GHSolution& sol, double xval, double vval) {
    const int n = sol.params.n;
    const double q = sol.params.q;
    const int k = sol.params.k;
    const Jet2 x = Jet2::var_a(xval);
    const Jet2 v = Jet2::var_b(vval);
    const double s = sol.branch;
    if (vval <= 0) throw DomainError("gh: v must be positive");
    switch (sol.id) {
        case GHSolutionId::S1:
            return {s * std::sqrt(2.0 * k / (q + 1)) * jpow(v, (q + 1) / 2), Jet2::constant(0)};
        case GHSolutionId::S2:
            return {Jet2::constant(0),
                    (2.0 - n) * v + s * std::sqrt((2.0 - n) * k) * jpow(v, 1.0 / (n - 2))};
        case GHSolutionId::S3: {
            Jet2 G = (s * k / double(n - 3)) * jpow(v, double(n - 1) / (n - 2));
            return {G, (2.0 - n) * v + s * G};
        }
        case GHSolutionId::S4:
            if (std::abs(xval) < 1e-12) throw DomainError("S4: x = 0 excluded");
            return {s / v + v / x, Jet2::constant(0)}; // sqrt(-k) = 1 at k = -1
        case GHSolutionId::C1:
            return {s * std::sqrt(k * double(n - 1) / (n + 1)) * x *
                        jpow(v, double(n + 1) / (n - 1)),
                    0.5 * (n - 1) * x * v};
        case GHSolutionId::PTrans: {
            double D = n * (1 - q) + 1 + q;
            Jet2 rad = x * x * ((q - 1) * (q - 1)) + (2.0 * k * D) * jpow(v, 1 - q);
            if (rad.f <= 0) throw DomainError("P-trans: radicand not positive");
            return {(s / D) * jpow(v, q) * jsqrt(rad), (k * (q - 1) / D) * x * jpow(v, q)};
        }
        case GHSolutionId::PScal: {
            const double p = exponent_p(sol.params);
            if (std::abs(xval * xval - 1) < 1e-12) throw DomainError("P-scal: x = +-1 excluded");
            Jet2 A = (k / 4.0) * ((q - 1) * (q - 1)) * jpow(v, q - 1);
            Jet2 rad = (A * (x * x) - 1.0) * (A - 1.0);
            if (rad.f <= 0) throw DomainError("P-scal: radicand not positive");
            Jet2 G = (p * x * v / (x * x - 1.0)) * (1.0 - A + s * jsqrt(rad));
            Jet2 H = -G / x - (0.5 * k * (q - 1)) * jpow(v, q);
            return {G, H};
        }
        case GHSolutionId::PInver: {
            const double p = exponent_p(sol.params);
            Jet2 rad = jpow(v, 2 * q) / (p * p) - double(k) * jpow(v, q + 1);
            if (rad.f <= 0) throw DomainError("P-inver: radicand not positive");
            return {s * x * jsqrt(rad), -p * x * v + (k / p) * x * jpow(v, q)};
        }
        case GHSolutionId::PTi1: {
            const double p = exponent_p(sol.params);
            if (sol.as_printed) {
                Jet2 rad = (4.0 + (k / (p * p)) * (x * x) * jpow(v, q - 1)) *
                           (double(k) * x * jpow(v, q + 1) - (p * p) * (x * x) * (v * v));
                if (rad.f <= 0) throw DomainError("P-ti1(as printed): radicand not positive");
                return {s * x * jsqrt(rad), p * x * v - (k / p) * x * jpow(v, q)};
            }
            Jet2 rad = (x * x) * jpow(v, 2 * q) / (p * p) +
                       double(k) * (4.0 - x * x) * jpow(v, q + 1) - (4 * p * p) * (v * v);
            if (rad.f <= 0) throw DomainError("P-ti1: radicand not positive");
            return {s * jsqrt(rad), -p * x * v + (k / p) * x * jpow(v, q)};
        }
        case GHSolutionId::PTi2: {
            const double p = exponent_p(sol.params);
            Jet2 rad = (2.0 * k / (q + 1)) * (x * x + 4.0) * jpow(v, q + 1) -
                       (4 * p * p) * (v * v);
            if (rad.f <= 0) throw DomainError("P-ti2: radicand not positive");
            if (sol.as_printed) return {s * x * jsqrt(rad), p * x * v};
            return {s * jsqrt(rad), -p * x * v};
        }
    }
    throw UnsupportedParams("unknown GH solution");
}

} // namespace

GHJet eval_gh(const GHSolution& sol, double x, double v) {
    require_gh_constraints(sol);
    auto [G, H] = gh_jets(sol, x, v);
    return {G.f, G.fa, G.fb, H.f, H.fa, H.fb};
}

bool gh_valid(const GHSolution& sol, double x, double v) {
    try {
        (void)eval_gh(sol, x, v);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

std::pair<double, double> resolving_residual_at(const FoliationChart& chart,
                                                const GHJet& gh, double x, double v) {
    const int n = chart.params.n;
    const double q = chart.params.q;
    const int k = chart.params.k;
    const double p = chart_p(chart);
    const double vq = real_pow(v, q);
    double e1 = 0, e2 = 0;
    switch (chart.kind) {
        case ChartKind::Scaling:
            e1 = (p - 1) * gh.G - x * gh.Gx + (gh.H - p * v) * gh.Gv - gh.Hx - gh.G * gh.Hv;
            e2 = gh.Gx + gh.G * gh.Gv - (p + n - 2) * gh.H + x * gh.Hx -
                 (gh.H - p * v) * gh.Hv - k * vq;
            break;
        case ChartKind::Translation:
            e1 = gh.Gx + gh.H * gh.Gv - gh.G * gh.Hv;
            e2 = gh.G * gh.Gv - gh.H * gh.Hv - gh.Hx - (n - 1) / x * gh.H - k * vq;
            break;
        case ChartKind::Conformal:
        case ChartKind::TransInversion: {
            double f = x * x + 4.0 * conformal_weight(chart.kind);
            e1 = f * gh.Gx + gh.G * gh.Hv - gh.H * gh.Gv;
            e2 = (gh.G * gh.Gv - gh.H * gh.Hv) / f + gh.Hx + p * (p + 1) * v - k * vq;
            break;
        }
    }
    double scale = std::max(1.0, std::abs(k * vq));
    return {std::abs(e1) / scale, std::abs(e2) / scale};
}

GridSpec default_grid(const GHSolution& sol) {
    GridSpec g; // x, v in [0.25, 4]
    const int n = sol.params.n;
    const int k = sol.params.k;
    const double q = sol.params.q;
    const double p = 2.0 / (1.0 - q);
    switch (sol.id) {
        case GHSolutionId::S1:
        case GHSolutionId::S2:
        case GHSolutionId::S3:
        case GHSolutionId::S4:
        case GHSolutionId::C1:
            break;
        case GHSolutionId::PTrans: {
            double D = n * (1 - q) + 1 + q;
            if (2 * k * D < 0) {
                // radicand x^2 (q-1)^2 + 2kD v^{1-q} > 0: keep x large, v away from 0
                g.x0 = 1.5;
                g.v0 = 1.2;
            }
            break;
        }
        case GHSolutionId::PScal:
            if (k > 0) {
                // need A < 1 and A x^2 < 1 with A = (q-1)^2 v^{q-1}/4
                double vmax = real_pow(3.2 / ((q - 1) * (q - 1)), 1.0 / (q - 1));
                g.v0 = 0.05 * vmax;
                g.v1 = 0.85 * vmax;
                g.x0 = 0.1;
                g.x1 = 0.9;
            } else {
                g.x0 = 0.1;
                g.x1 = 0.9; // avoid x = 1
            }
            break;
        case GHSolutionId::PInver:
            if (k > 0) {
                double vmin = real_pow(p * p, 1.0 / (q - 1));
                g.v0 = 1.25 * vmin;
                g.v1 = 4.0 * vmin;
            }
            break;
        case GHSolutionId::PTi1:
            if (k > 0) {
                double vmin = real_pow(4 * p * p, 1.0 / (q - 1)); // radicand > 0 for v above
                g.v0 = 1.2 * vmin;
                g.v1 = 3.0 * vmin;
            } else {
                // x^2 v^{2q}/p^2 dominates once x > 2 and v^{2q-2} > 4 p^4/x^2
                g.x0 = 2.2;
                double vmin = real_pow(4 * p * p * p * p / (2.2 * 2.2), 1.0 / (2 * q - 2));
                g.v0 = 1.25 * vmin;
                g.v1 = 2.5 * vmin;
            }
            break;
        case GHSolutionId::PTi2: {
            // radicand > 0 needs v^{q-1} > 2 p^2 (q+1)/(x^2+4); worst at x = 0.25
            double vmin = real_pow(2 * p * p * (q + 1) / 4.0625, 1.0 / (q - 1));
            g.v0 = 1.35 * vmin;
            g.v1 = 4.0 * vmin;
            break;
        }
    }
    return g;
}

ResolvingReport resolving_residual(const GHSolution& sol,
                                   std::span<const std::pair<double, double>> points,
                                   double tol) {
    require_gh_constraints(sol);
    FoliationChart chart(chart_of(sol.id), sol.params);
    ResolvingReport rep;
    rep.tol = tol;
    for (auto [x, v] : points) {
        try {
            GHJet jet = eval_gh(sol, x, v);
            auto [e1, e2] = resolving_residual_at(chart, jet, x, v);
            rep.max_residual = std::max({rep.max_residual, e1, e2});
            ++rep.evaluated;
        } catch (const DomainError&) {
            ++rep.skipped;
        }
    }
    rep.pass = rep.evaluated > 0 && rep.max_residual < tol;
    return rep;
}

ResolvingReport resolving_residual(const GHSolution& sol, const GridSpec& grid, double tol) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            double x = grid.x0 + (grid.x1 - grid.x0) * i / std::max(1, grid.nx - 1);
            double v = grid.v0 + (grid.v1 - grid.v0) * j / std::max(1, grid.nv - 1);
            pts.emplace_back(x, v);
        }
    return resolving_residual(sol, pts, tol);
}

// --- potentials ----------------------------------------------------------------

const char* potential_name(PotentialId id) {
    switch (id) {
        case PotentialId::PhiTrans: return "Phi-trans";
        case PotentialId::PsiTrans: return "Psi-trans";
        case PotentialId::PsiScal: return "Psi-scal";
        case PotentialId::PsiInver: return "Psi-inver";
        case PotentialId::PsiTi1: return "Psi-ti1";
        case PotentialId::PsiTi2: return "Psi-ti2";
    }
    return "?";
}

std::vector<PotentialId> all_potentials() {
    return {PotentialId::PhiTrans, PotentialId::PsiTrans, PotentialId::PsiScal,
            PotentialId::PsiInver, PotentialId::PsiTi1, PotentialId::PsiTi2};
}

GHSolutionId induced_gh(PotentialId id) {
    switch (id) {
        case PotentialId::PhiTrans: return GHSolutionId::S1;
        case PotentialId::PsiTrans: return GHSolutionId::PTrans;
        case PotentialId::PsiScal: return GHSolutionId::PScal;
        case PotentialId::PsiInver: return GHSolutionId::PInver;
        case PotentialId::PsiTi1: return GHSolutionId::PTi1;
        case PotentialId::PsiTi2: return GHSolutionId::PTi2;
    }
    return GHSolutionId::S1;
}

ChartKind chart_of(PotentialId id) { return chart_of(induced_gh(id)); }

PotentialJet eval_potential(const PotentialSolution& pot, double xval, double vval) {
    const int n = pot.params.n;
    const double q = pot.params.q;
    const int k = pot.params.k;
    const Jet2 x = Jet2::var_a(xval);
    const Jet2 v = Jet2::var_b(vval);
    if (vval <= 0) throw DomainError("potential: v must be positive");
    Jet2 psi;
    switch (pot.id) {
        case PotentialId::PhiTrans:
            psi = (pot.branch * std::sqrt(2.0 * (q + 1) / k) / (q - 1)) * jpow(v, (1 - q) / 2);
            break;
        case PotentialId::PsiTrans: {
            double D = n * (1 - q) + 1 + q;
            psi = (double(k) / (n * D)) * jpow(x, n) * jpow(v, q + 1);
            break;
        }
        case PotentialId::PsiScal:
            psi = (-0.5 * k * (q - 1) / (q + 1)) * x * jpow(v, q + 1);
            break;
        case PotentialId::PsiInver:
        case PotentialId::PsiTi1: {
            double p = exponent_p(pot.params);
            psi = double(k) * x * jpow(v, q + 1) - (p * p) * x * (v * v);
            break;
        }
        case PotentialId::PsiTi2: {
            double p = exponent_p(pot.params);
            psi = (2.0 * k / (q + 1)) * x * jpow(v, q + 1) - (p * p) * x * (v * v);
            break;
        }
    }
    return {psi.f, psi.fa, psi.fb};
}

namespace {

/// Declared flux pair (F1, F2) with (Psi_x, Psi_v) = (F1, F2), as jets in (x,v),
/// built from the induced GH solution's jets.
std::pair<Jet2, Jet2> potential_fluxes(const PotentialSolution& pot, double xval, double vval,
                                       const GHSolution& gh) {
    const int n = pot.params.n;
    const double q = pot.params.q;
    const int k = pot.params.k;
    const Jet2 x = Jet2::var_a(xval);
    const Jet2 v = Jet2::var_b(vval);
    auto [G, H] = [&] {
        // jets of G and H over (x, v)
        GHJet j = eval_gh(gh, xval, vval);
        Jet2 Gj{j.G, j.Gx, j.Gv, 0, 0, 0};
        Jet2 Hj{j.H, j.Hx, j.Hv, 0, 0, 0};
        return std::make_pair(Gj, Hj);
    }();
    switch (pot.id) {
        case PotentialId::PhiTrans:
            return {H / G, -1.0 / G};
        case PotentialId::PsiTrans:
            return {jpow(x, n - 1) * (G * G - H * H) * 0.5,
                    jpow(x, n - 1) * H + (double(k) / n) * jpow(x, n) * jpow(v, q)};
        case PotentialId::PsiScal: {
            double p = exponent_p(pot.params);
            return {0.5 * (H * H - G * G) - p * v * H + (double(k) / (q + 1)) * jpow(v, q + 1),
                    G + x * H}; // note: (F1, F2) = (Psi_x, Psi_v)
        }
        case PotentialId::PsiInver:
        case PotentialId::PsiTi1: {
            double p = exponent_p(pot.params);
            double a4 = pot.id == PotentialId::PsiTi1 ? 4.0 : 0.0;
            Jet2 f = x * x + a4;
            return {(G * G - H * H) / f,
                    -2.0 * H - (2 * p * (p + 1)) * x * v + (2.0 * k) * x * jpow(v, q)};
        }
        case PotentialId::PsiTi2: {
            double p = exponent_p(pot.params);
            Jet2 f = x * x + 4.0;
            return {(G * G - H * H) / f,
                    -2.0 * H - (2 * p * (p + 1)) * x * v + (2.0 * k) * x * jpow(v, q)};
        }
    }
    throw UnsupportedParams("unknown potential");
}

/// Induced (G,H) recovered from the potential's closed form alone.
std::pair<double, double> induced_from_potential(const PotentialSolution& pot, double x,
                                                 double v, const GHJet& declared) {
    const int n = pot.params.n;
    const double q = pot.params.q;
    const int k = pot.params.k;
    PotentialJet P = eval_potential(pot, x, v);
    switch (pot.id) {
        case PotentialId::PhiTrans: {
            double G = -1.0 / P.d_v;
            double H = -P.d_x / P.d_v;
            return {G, H};
        }
        case PotentialId::PsiTrans: {
            double H = real_pow(x, 1.0 - n) * P.d_v - (double(k) / n) * x * real_pow(v, q);
            double G2 = 2 * real_pow(x, 1.0 - n) * P.d_x + H * H;
            if (G2 < 0) throw DomainError("induced G^2 negative");
            double G = std::copysign(std::sqrt(G2), declared.G);
            return {G, H};
        }
        case PotentialId::PsiScal: {
            // Psi_v = G + xH; Psi_x = (H^2-G^2)/2 - pvH + k v^{q+1}/(q+1):
            // quadratic in H once G = Psi_v - xH is substituted.
            double p = exponent_p(pot.params);
            double A = 0.5 * (1 - x * x);
            double B = x * P.d_v - p * v;
            double C = -0.5 * P.d_v * P.d_v + double(k) / (q + 1) * real_pow(v, q + 1) - P.d_x;
            double disc = B * B - 4 * A * C;
            if (disc < 0) throw DomainError("induced H: negative discriminant");
            double h1 = (-B + std::sqrt(disc)) / (2 * A);
            double h2 = (-B - std::sqrt(disc)) / (2 * A);
            double H = std::abs(h1 - declared.H) < std::abs(h2 - declared.H) ? h1 : h2;
            return {P.d_v - x * H, H};
        }
        case PotentialId::PsiInver:
        case PotentialId::PsiTi1:
        case PotentialId::PsiTi2: {
            double p = exponent_p(pot.params);
            double f = x * x + (pot.id == PotentialId::PsiInver ? 0.0 : 4.0);
            double H = -0.5 * (P.d_v + 2 * p * (p + 1) * x * v - 2.0 * k * x * real_pow(v, q));
            double G2 = f * P.d_x + H * H;
            if (G2 < 0) throw DomainError("induced G^2 negative");
            double G = std::copysign(std::sqrt(G2), declared.G);
            return {G, H};
        }
    }
    throw UnsupportedParams("unknown potential");
}

} // namespace

PotentialCheckReport potential_check(const PotentialSolution& pot, const GridSpec& grid,
                                     double grad_tol, double curl_tol, double induced_tol) {
    GHSolution ghsol{induced_gh(pot.id), pot.params, pot.branch, false};
    require_gh_constraints(ghsol);
    if (pot.id == PotentialId::PsiScal && !is_conformal(pot.params))
        throw UnsupportedParams("Psi-scal: strict conservation needs 2p+n-1=0 (q = q_c)");
    FoliationChart chart(chart_of(pot.id), pot.params);
    PotentialCheckReport rep;
    for (int i = 0; i < grid.nx; ++i)
        for (int j = 0; j < grid.nv; ++j) {
            double x = grid.x0 + (grid.x1 - grid.x0) * i / std::max(1, grid.nx - 1);
            double v = grid.v0 + (grid.v1 - grid.v0) * j / std::max(1, grid.nv - 1);
            try {
                GHJet declared = eval_gh(ghsol, x, v);
                PotentialJet P = eval_potential(pot, x, v);
                auto [F1, F2] = potential_fluxes(pot, x, v, ghsol);
                double fscale = std::max({1.0, std::abs(F1.f), std::abs(F2.f)});
                rep.max_gradient_mismatch =
                    std::max({rep.max_gradient_mismatch, std::abs(P.d_x - F1.f) / fscale,
                              std::abs(P.d_v - F2.f) / fscale});
                // curl-freeness d(F1)/dv - d(F2)/dx via the flux jets
                double dscale = std::max({1.0, std::abs(F1.fb), std::abs(F2.fa)});
                rep.max_curl = std::max(rep.max_curl, std::abs(F1.fb - F2.fa) / dscale);
                auto [Gi, Hi] = induced_from_potential(pot, x, v, declared);
                double gh_scale = std::max({1.0, std::abs(declared.G), std::abs(declared.H)});
                rep.max_induced_mismatch =
                    std::max({rep.max_induced_mismatch, std::abs(Gi - declared.G) / gh_scale,
                              std::abs(Hi - declared.H) / gh_scale});
                GHJet ind = declared; // residual of the induced pair: reuse declared partials,
                ind.G = Gi;           // values replaced by the recovered ones
                ind.H = Hi;
                auto [e1, e2] = resolving_residual_at(chart, ind, x, v);
                rep.max_resolving_residual = std::max({rep.max_resolving_residual, e1, e2});
                ++rep.evaluated;
            } catch (const DomainError&) {
                ++rep.skipped;
            }
        }
    rep.pass = rep.evaluated > 0 && rep.max_gradient_mismatch < grad_tol &&
               rep.max_curl < curl_tol && rep.max_induced_mismatch < induced_tol;
    return rep;
}

// --- ansatz replay ---------------------------------------------------------------

AnsatzReport ansatz_coefficient_check(AnsatzCase which, int n, double q, int k) {
    if (n < 1) throw UnsupportedParams("ansatz check: n >= 1 required");
    AnsatzReport rep;
    rep.which = which;
    std::ostringstream os;
    if (which == AnsatzCase::HalfQPlusOne) {
        // a = b = (q+1)/2:  x g' + h' = 0;  g' + (1-n)h + x h' = 0;  g^2 - h^2 = 2k/(q+1).
        os << "case a=b=(q+1)/2: differentiating g^2-h^2 = 2k/(q+1) and using xg'+h'=0 "
              "gives (xh+g)g' = 0. ";
        os << "g = -xh forces nh = 0, so h = 0 and g = 0, contradicting g^2-h^2 = 2k/(q+1). ";
        os << "Hence g' = 0, and xg'+h' = 0 gives h' = 0; then (1-n)h = 0";
        if (n == 1) {
            rep.n_equals_one_hint = true;
            os << " is vacuous at n=1: the solution generalizes to "
                  "g = +-sqrt((c^2+2k)/(q+1)), h = c/sqrt(q+1); rejected (out of scope).";
            rep.has_solution = false;
        } else {
            os << ", so h = 0 and g = +-sqrt(2k/(q+1)).";
            double arg = 2.0 * k / (q + 1);
            if (arg <= 0) {
                rep.has_solution = false;
                os << " (not real for these (q,k))";
            } else {
                rep.has_solution = true;
                rep.g = std::sqrt(arg);
                rep.h = 0;
            }
        }
    } else {
        // a = b = q:  h' + xg' - g = 0;  xh' - nh + g' = k;  g^2 = h^2.
        os << "case a=b=q: g = e*h with e=+-1; the ODEs reduce to (x+e)h' = h and "
              "(x+e)h' = k + nh, so h = k/(1-n) is constant, forcing h' = 0 and h = 0, "
              "which contradicts h = k/(1-n) != 0. No solution for any n >= 1.";
        rep.has_solution = false;
    }
    rep.narrative = os.str();
    return rep;
}

nlohmann::json resolving_report_json(const GHSolution& sol, const GridSpec& grid,
                                     const ResolvingReport& rep) {
    nlohmann::json j;
    j["solution"] = gh_name(sol.id);
    j["chart"] = chart_name(chart_of(sol.id));
    j["n"] = sol.params.n;
    j["q"] = sol.params.q;
    j["k"] = sol.params.k;
    j["branch"] = sol.branch;
    j["grid"] = {{"x", {grid.x0, grid.x1}}, {"v", {grid.v0, grid.v1}},
                 {"nx", grid.nx}, {"nv", grid.nv}};
    j["max_residual"] = rep.max_residual;
    j["evaluated"] = rep.evaluated;
    j["skipped"] = rep.skipped;
    j["pass"] = rep.pass;
    return j;
}

} // namespace radialwave
