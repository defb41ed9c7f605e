#include "radialwave/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <random>

#include <nlohmann/json.hpp>

namespace radialwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double qc(int n) { return conformal_power(n); }

bool close(double a, double b) { return std::abs(a - b) < kPowerClassifyTol; }

bool nonneg_int(double e) {
    long long ei;
    return nearly_integer(e, ei) && ei >= 0;
}

struct FamilyForm {
    double prefactor = 1.0;
    double exponent = 1.0;
};

FamilyForm form_of(const SolutionFamily& f) {
    const int n = f.params.n;
    const double q = f.params.q;
    const int k = f.params.k;
    switch (f.id) {
        case FamilyId::U1:
            return {1.0, 2.0 / (1.0 - q)};
        case FamilyId::U2:
            return {1.0, 1.0 / (1.0 - q)};
        case FamilyId::U3:
            return {1.0, double(n - 2) / (n - 3)};
        case FamilyId::U4:
            return {1.0, double(2 - n)};
        case FamilyId::U5:
            return {1.0, 0.5};
        case FamilyId::U6:
            return {1.0, 0.5 * (1 - n)};
        case FamilyId::U7:
        case FamilyId::U8:
        case FamilyId::U9:
            return {1.0, 0.25 * (1 - n)};
        case FamilyId::IV1:
        case FamilyId::IV2:
            return {real_pow(n * (n - 2) / (4.0 * k), (n - 2) / 4.0),
                    f.id == FamilyId::IV1 ? 1 - n / 2.0 : (2 - n) / 4.0};
        case FamilyId::IV3:
            return {real_pow(f.branch * double(n) * (n - 2) / k, (n - 2) / 4.0), 1 - n / 2.0};
        case FamilyId::IV4:
            return {real_pow(f.branch * double(n - 3) / (n - 2) * std::sqrt(1.0 / (n - 2)), // k=-1: sqrt(k/(2-n))=sqrt(1/(n-2))
                             double(n - 2) / (n - 3)),
                    double(n - 2) / (n - 3)};
        case FamilyId::IV5:
            return {real_pow((n - 2) / 2.0, (n - 2) / 2.0), 1 - n / 2.0}; // k=+1
        case FamilyId::IV6: {
            double arg = f.as_printed ? (n - 1.0) * (n - 3.0) / 2.0   // paper's 2*sqrt(k), k=+1
                                      : (n - 1.0) * (n - 3.0) / (4.0 * k);
            return {real_pow(arg, (n - 1) / 4.0), 0.5 * (1 - n)};
        }
    }
    throw UnsupportedParams("unknown family");
}

} // namespace

const char* family_name(FamilyId id) {
    switch (id) {
        case FamilyId::U1: return "U1";
        case FamilyId::U2: return "U2";
        case FamilyId::U3: return "U3";
        case FamilyId::U4: return "U4";
        case FamilyId::U5: return "U5";
        case FamilyId::U6: return "U6";
        case FamilyId::U7: return "U7";
        case FamilyId::U8: return "U8";
        case FamilyId::U9: return "U9";
        case FamilyId::IV1: return "IV1";
        case FamilyId::IV2: return "IV2";
        case FamilyId::IV3: return "IV3";
        case FamilyId::IV4: return "IV4";
        case FamilyId::IV5: return "IV5";
        case FamilyId::IV6: return "IV6";
    }
    return "?";
}

std::optional<FamilyId> family_from_name(const std::string& name) {
    std::string s;
    for (char ch : name) s.push_back(static_cast<char>(std::toupper(ch)));
    for (FamilyId id : all_families())
        if (s == family_name(id)) return id;
    return std::nullopt;
}

std::vector<FamilyId> all_families() {
    return {FamilyId::U1, FamilyId::U2, FamilyId::U3, FamilyId::U4, FamilyId::U5,
            FamilyId::U6, FamilyId::U7, FamilyId::U8, FamilyId::U9,
            FamilyId::IV1, FamilyId::IV2, FamilyId::IV3, FamilyId::IV4,
            FamilyId::IV5, FamilyId::IV6};
}

std::string family_constraint_text(FamilyId id) {
    switch (id) {
        case FamilyId::U1: return "q != 1, q != -1, k/(q+1) > 0";
        case FamilyId::U2: return "q != 1, q != (n+1)/(n-1)";
        case FamilyId::U3: return "q = (4-n)/(n-2), n not in {2,3}, k = -1";
        case FamilyId::U4: return "q = (n-1)/(n-2), n not in {2,3}";
        case FamilyId::U5: return "q = -3, k = -1";
        case FamilyId::U6: return "q = (n+3)/(n-1), k = +1";
        case FamilyId::U7: return "q = (n+3)/(n-1)";
        case FamilyId::U8: return "q = (n+3)/(n-1), c != 0";
        case FamilyId::U9: return "q = (n+3)/(n-1), c != 0";
        case FamilyId::IV1: return "q = (n+2)/(n-2), n != 2, prefactor real";
        case FamilyId::IV2: return "q = (n+2)/(n-2), n != 2, prefactor real";
        case FamilyId::IV3: return "q = (n+2)/(n-2), n != 2, branch = k";
        case FamilyId::IV4: return "q = (4-n)/(n-2), n not in {2,3}, k = -1";
        case FamilyId::IV5: return "q = (n+2)/(n-2), n != 2, k = +1";
        case FamilyId::IV6: return "q = (n+3)/(n-1) (zero solution at n = 3)";
    }
    return "";
}

void require_constraints(const SolutionFamily& f) {
    const int n = f.params.n;
    const double q = f.params.q;
    const int k = f.params.k;
    auto fail = [&](const std::string& msg) {
        throw UnsupportedParams(std::string(family_name(f.id)) + ": " + msg);
    };
    if (f.branch != 1 && f.branch != -1) fail("branch must be +1 or -1");
    switch (f.id) {
        case FamilyId::U1:
            if (close(q, -1.0)) fail("q = -1 excluded");
            if (k / (q + 1.0) <= 0) fail("k/(q+1) must be positive");
            break;
        case FamilyId::U2:
            if (close(q, double(n + 1) / (n - 1))) fail("q = (n+1)/(n-1) excluded");
            break;
        case FamilyId::U3:
            if (n == 2 || n == 3) fail("n in {2,3} excluded");
            if (!close(q, inverse_dilation_power(n))) fail("requires q = (4-n)/(n-2)");
            if (k != -1) fail("requires k = -1");
            break;
        case FamilyId::U4:
            if (n == 2 || n == 3) fail("n in {2,3} excluded");
            if (!close(q, static_line_power(n))) fail("requires q = (n-1)/(n-2)");
            break;
        case FamilyId::U5:
            if (!close(q, -3.0)) fail("requires q = -3");
            if (k != -1) fail("requires k = -1");
            break;
        case FamilyId::U6:
            if (!close(q, qc(n))) fail("requires the conformal power");
            if (k != 1) fail("requires k = +1");
            break;
        case FamilyId::U7:
            if (!close(q, qc(n))) fail("requires the conformal power");
            break;
        case FamilyId::U8:
        case FamilyId::U9:
            if (!close(q, qc(n))) fail("requires the conformal power");
            if (f.c == 0) fail("c = 0 excluded");
            break;
        case FamilyId::IV1:
        case FamilyId::IV2:
        case FamilyId::IV5:
            if (n == 2) fail("n = 2 excluded");
            if (!close(q, critical_power(n))) fail("requires the critical power");
            if (f.id == FamilyId::IV5 && k != 1) fail("requires k = +1");
            break;
        case FamilyId::IV3:
            if (n == 2) fail("n = 2 excluded");
            if (!close(q, critical_power(n))) fail("requires the critical power");
            if (f.branch != k) fail("branch sign must equal k");
            break;
        case FamilyId::IV4:
            if (n == 2 || n == 3) fail("n in {2,3} excluded");
            if (!close(q, inverse_dilation_power(n))) fail("requires q = (4-n)/(n-2)");
            if (k != -1) fail("requires k = -1");
            break;
        case FamilyId::IV6:
            if (!close(q, qc(n))) fail("requires the conformal power");
            break; // n = 3 degenerates to the zero solution
    }
    try {
        (void)form_of(f); // prefactor must be real
    } catch (const DomainError&) {
        fail("prefactor is not real for these parameters");
    }
}

bool constraints_ok(const SolutionFamily& f) {
    try {
        require_constraints(f);
        return true;
    } catch (const UnsupportedParams&) {
        return false;
    }
}

double family_exponent(const SolutionFamily& f) { return form_of(f).exponent; }

Jet2 family_base_jet(const SolutionFamily& f, double t, double r) {
    const int n = f.params.n;
    const double q = f.params.q;
    const int k = f.params.k;
    const Jet2 T = Jet2::var_a(t - f.t_shift);
    const Jet2 R = Jet2::var_b(r);
    const double c = f.c;
    const int s = f.branch;
    switch (f.id) {
        case FamilyId::U1:
            return (s * std::sqrt(k / (2.0 * (q + 1.0))) * (q - 1.0)) * (T + c);
        case FamilyId::U2: {
            double B = k * (q - 1) * (q - 1) / (2.0 * (q * (1 - n) + n + 1));
            return B * ((T + c) * (T + c) - R * R);
        }
        case FamilyId::U3: {
            double a = s * 1.0 * (n - 3) / std::pow(std::sqrt(double(n - 2)), 3); // sqrt(-k)=1
            return a * R + c * jpow_int(R, 3 - n);
        }
        case FamilyId::U4:
            return (double(k) / ((n - 2) * (n - 3))) * (Jet2::constant(c) + double(s) * T - R) * R;
        case FamilyId::U5:
            return double(s) * 2.0 * T * (1.0 + c * T); // sqrt(-k)=1
        case FamilyId::U6: {
            double a = 2.0 * std::sqrt(k / double(n * n - 1));
            return double(s) * a * T + c * (T * T - R * R);
        }
        case FamilyId::U7: {
            Jet2 W = T * T - R * R;
            return (4.0 * k / double((n - 1) * (n - 1))) * (R * R - T * T) *
                   (1.0 + 2.0 * c * T + c * c * W);
        }
        case FamilyId::U8: {
            Jet2 W = T * T - R * R;
            Jet2 inner = f.branch < 0 ? Jet2::constant(1.0 / c) - c * W
                                      : Jet2::constant(1.0 / c) + c * W;
            double outer = f.branch < 0 ? +0.25 : -0.25;
            return (4.0 * k / double((n - 1) * (n - 1))) * (T * T + outer * inner * inner);
        }
        case FamilyId::U9: {
            Jet2 W = T * T - R * R;
            Jet2 lin = 1.0 + 2.0 * f.c_tilde * T + f.c_tilde * f.c_tilde * W;
            Jet2 inner = f.branch > 0 ? c * W + lin / c : c * W - lin / c;
            double o2 = f.branch > 0 ? +0.25 : -0.25;
            return (4.0 * k / double((n - 1) * (n - 1))) * (R * R + o2 * inner * inner);
        }
        case FamilyId::IV1:
            return T;
        case FamilyId::IV2:
            return R * R - T * T;
        case FamilyId::IV3:
            return R * R + double(f.branch);
        case FamilyId::IV4:
        case FamilyId::IV5:
        case FamilyId::IV6:
            return R;
    }
    throw UnsupportedParams("unknown family");
}

double family_base(const SolutionFamily& f, double t, double r) {
    return family_base_jet(f, t, r).f;
}

namespace {

Jet2 u_jet(const SolutionFamily& f, double t, double r) {
    FamilyForm form = form_of(f);
    Jet2 base = family_base_jet(f, t, r);
    if (f.id == FamilyId::U5) return jsqrt(base);
    return form.prefactor * jpow(base, form.exponent);
}

} // namespace

SingularSetDescriptor singular_set(const SolutionFamily& f) {
    require_constraints(f);
    const int n = f.params.n;
    const double q = f.params.q;
    const double sh = f.t_shift;
    SingularSetDescriptor d;
    using K = SingularComponent::Kind;
    using H = SingularComponent::Half;
    auto line = [&](double t0) { d.components.push_back({K::TimeLine, H::Full, t0 + sh, 0, 0, 0}); };
    auto cone = [&](double t0, H half = H::Full) {
        d.components.push_back({K::LightCone, half, t0 + sh, 0, 0, 0});
    };
    auto axis = [&] { d.components.push_back({K::Axis, H::Full, 0, 0, 0, 0}); };
    auto radius = [&](double r0) { d.components.push_back({K::Radius, H::Full, 0, 0, 0, r0}); };
    switch (f.id) {
        case FamilyId::U1:
            if (!nonneg_int(2.0 / (1.0 - q))) line(-f.c);
            break;
        case FamilyId::U2:
            if (!nonneg_int(1.0 / (1.0 - q))) cone(-f.c);
            break;
        case FamilyId::U3: {
            if (f.c != 0) axis();
            double a = f.branch * double(n - 3) / std::pow(std::sqrt(double(n - 2)), 3);
            double ratio = -f.c / a;
            if (ratio > 0 && !nonneg_int(double(n - 2) / (n - 3)))
                radius(std::pow(ratio, 1.0 / (n - 2)));
            break;
        }
        case FamilyId::U4:
            axis();
            cone(-f.branch * f.c, f.branch > 0 ? H::Future : H::Past);
            break;
        case FamilyId::U5:
            line(0);
            if (f.c != 0) line(-1.0 / f.c);
            break;
        case FamilyId::U6: {
            if (f.c == 0) {
                line(0);
            } else {
                double a = 2.0 * std::sqrt(f.params.k / double(n * n - 1));
                double tc = -f.branch * a / (2.0 * f.c);
                double tstar = std::abs(a / (2.0 * f.c));
                d.components.push_back({K::Hyperbola, H::Full, 0, tc + sh, tstar, 0});
            }
            break;
        }
        case FamilyId::U7:
            cone(0);
            if (f.c != 0) cone(-1.0 / f.c);
            break;
        case FamilyId::U8:
            if (f.branch > 0) { // blow-up branch
                cone(-1.0 / f.c);
                cone(+1.0 / f.c);
            }
            break;
        case FamilyId::U9:
            if (f.branch < 0)
                throw UnsupportedParams("U9 branch -: singular set is a quartic curve, "
                                        "not expressible in the descriptor language");
            break; // branch +: globally smooth
        case FamilyId::IV1:
            line(0);
            break;
        case FamilyId::IV2:
            cone(0);
            break;
        case FamilyId::IV3:
            if (f.branch < 0) radius(1.0);
            break;
        case FamilyId::IV4:
            if (!nonneg_int(double(n - 2) / (n - 3))) axis();
            break;
        case FamilyId::IV5:
            axis();
            break;
        case FamilyId::IV6:
            if (n != 3) axis(); // n = 3 is the zero solution
            break;
    }
    return d;
}

double singular_distance(const SingularSetDescriptor& d, double t, double r) {
    using K = SingularComponent::Kind;
    using H = SingularComponent::Half;
    double best = kInf;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (const auto& comp : d.components) {
        double dist = kInf;
        switch (comp.kind) {
            case K::TimeLine: dist = std::abs(t - comp.t0); break;
            case K::Axis: dist = std::abs(r); break;
            case K::Radius: dist = std::abs(r - comp.r0); break;
            case K::LightCone: {
                double dt = t - comp.t0;
                auto ray = [&](double sgn) {
                    double along = 0.5 * (r + sgn * dt);
                    double perp = std::abs(r - sgn * dt) * inv_sqrt2;
                    if (along >= 0) return perp;
                    return std::hypot(r, dt); // distance to the vertex
                };
                if (comp.half == H::Full) dist = std::min(ray(+1), ray(-1));
                else if (comp.half == H::Future) dist = ray(+1);
                else dist = ray(-1);
                break;
            }
            case K::Hyperbola: {
                double F = std::abs(t - comp.t_center) - std::hypot(r, comp.t_star);
                dist = std::abs(F) * inv_sqrt2;
                break;
            }
        }
        best = std::min(best, dist);
    }
    return best;
}

Jet2Sample evaluate(const SolutionFamily& f, double t, double r, const EvalOptions& opts) {
    require_constraints(f);
    if (r < 0) throw DomainError("evaluate: r must be >= 0");
    if (opts.singular_guard > 0) {
        try {
            auto d = singular_set(f);
            double scale = 1.0 + std::abs(t) + std::abs(r);
            if (singular_distance(d, t, r) < opts.singular_guard * scale)
                throw DomainError("evaluate: point within the singular-set guard band");
        } catch (const UnsupportedParams&) {
            // U9 branch -: no descriptor; validity is guarded by base > 0 below.
        }
    }
    Jet2 u = u_jet(f, t, r);
    Jet2Sample s{t, r, u.f, u.fa, u.fb, u.faa, u.fab, u.fbb};
    if (!std::isfinite(s.u) || !std::isfinite(s.u_tt) || !std::isfinite(s.u_rr) ||
        !std::isfinite(s.u_tr) || !std::isfinite(s.u_t) || !std::isfinite(s.u_r))
        throw DomainError("evaluate: non-finite jet entries");
    return s;
}

double pde_residual_rel(const ModelParams& params, const Jet2Sample& s) {
    if (s.r <= 0) throw DomainError("residual: r must be positive");
    double uq = real_pow(s.u, params.q);
    double lhs = s.u_tt - s.u_rr - (params.n - 1) / s.r * s.u_r;
    double rhs = params.k * uq;
    return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

double pde_residual_rel(const SolutionFamily& f, double t, double r, const EvalOptions& opts) {
    return pde_residual_rel(f.params, evaluate(f, t, r, opts));
}

ResidualReport verify_residual(const SolutionFamily& fam,
                               std::span<const std::pair<double, double>> samples,
                               double tol) {
    ResidualReport rep;
    rep.tol = tol;
    for (auto [t, r] : samples) {
        ResidualReport::Entry e;
        e.t = t;
        e.r = r;
        try {
            e.residual = pde_residual_rel(fam, t, r);
            rep.max_residual = std::max(rep.max_residual, e.residual);
            ++rep.evaluated;
        } catch (const DomainError& ex) {
            e.domain_error = true;
            e.note = ex.what();
            ++rep.domain_errors;
        }
        rep.entries.push_back(std::move(e));
    }
    rep.pass = rep.evaluated > 0 && rep.max_residual < tol;
    return rep;
}

std::vector<std::pair<double, double>> sample_domain(const SolutionFamily& fam,
                                                     int count, std::uint64_t seed) {
    require_constraints(fam);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ut(0.12, 3.0), ur(0.12, 3.0), usign(0.0, 1.0);
    std::vector<std::pair<double, double>> out;
    int tries = 0;
    const int max_tries = 4000 * count;
    while (static_cast<int>(out.size()) < count && tries++ < max_tries) {
        double t = ut(rng);
        double r = ur(rng);
        if (usign(rng) < 0.5) t = -t; // both time half-planes
        try {
            double base = family_base(fam, t, r);
            if (base < 1e-4 * (1 + std::abs(t) + r)) continue;
            (void)pde_residual_rel(fam, t, r);
            out.emplace_back(t, r);
        } catch (const DomainError&) {
        }
    }
    if (static_cast<int>(out.size()) < count)
        throw DomainError(std::string("sample_domain: could not find enough valid points for ") +
                          family_name(fam.id));
    return out;
}

AsymptoticInfo asymptotics(const SolutionFamily& f) {
    const int n = f.params.n;
    const double q = f.params.q;
    const int k = f.params.k;
    const double p = 2.0 / (1.0 - q);
    AsymptoticInfo a;
    switch (f.id) {
        case FamilyId::U1:
            a = {0, 0, false, true, 0, 0, true};
            break;
        case FamilyId::U2: {
            double B = k * (q - 1) * (q - 1) / (2.0 * (q * (1 - n) + n + 1));
            a = {p, p - 2, true, (-B > 0) || nonneg_int(1.0 / (1 - q)), 0, 0, true};
            break;
        }
        case FamilyId::U3:
            a = {double(n - 2) / (n - 3), -kInf, true, f.branch > 0, 0, 0, f.c == 0};
            if (f.c != 0) {
                a.u_origin = double(2 - n);
                a.ut_origin = -kInf;
            }
            break;
        case FamilyId::U4:
            a = {p, p - 1, true, k == -1, double(2 - n), double(2 - n), false};
            break;
        case FamilyId::U5:
            a = {0, 0, false, true, 0, 0, true};
            break;
        case FamilyId::U6:
            if (f.c == 0) a = {0, 0, false, true, 0, 0, true};
            else a = {double(1 - n), double(-1 - n), true, f.c < 0, 0, 0, true};
            break;
        case FamilyId::U7:
            if (f.c == 0) a = {0.5 * (1 - n), 0.5 * (1 - n) - 2, true, k > 0, 0, 0, false};
            else a = {double(1 - n), double(-1 - n), true, k > 0, 0, 0, false};
            break;
        case FamilyId::U8:
            a = {double(1 - n), double(-1 - n), true, f.branch < 0 && k > 0, 0, 0, f.branch < 0};
            break;
        case FamilyId::U9:
            a = {double(1 - n), double(-1 - n), true, f.branch > 0 && k > 0, 0, 0,
                 f.branch > 0};
            break;
        case FamilyId::IV1:
            a = {0, 0, false, true, 0, 0, true};
            break;
        case FamilyId::IV2:
            a = {1 - n / 2.0, 1 - n / 2.0 - 2, true, true, 0, 0, false};
            break;
        case FamilyId::IV3:
            a = {double(2 - n), -kInf, true, true, 0, 0, f.branch > 0};
            break;
        case FamilyId::IV4:
            a = {double(n - 2) / (n - 3), -kInf, true, true, double(n - 2) / (n - 3), -kInf, true};
            break;
        case FamilyId::IV5:
            a = {1 - n / 2.0, -kInf, true, true, 1 - n / 2.0, -kInf, false};
            break;
        case FamilyId::IV6:
            a = {0.5 * (1 - n), -kInf, true, true, 0.5 * (1 - n), -kInf, n == 3};
            break;
    }
    return a;
}

namespace {

double integrand_exponent(const AsymptoticInfo& a, const ModelParams& params, bool tail) {
    double mu = tail ? a.u_tail : a.u_origin;
    double mut = tail ? a.ut_tail : a.ut_origin;
    double mur = a.r_dependent ? mu - 1 : -kInf;
    double m = std::max({2 * mut, 2 * mur, (params.q + 1) * mu});
    return m + (params.n - 1);
}

} // namespace

EnergyResult energy(const SolutionFamily& fam, double t0, double r_max,
                    int quadrature_points) {
    require_constraints(fam);
    if (r_max <= 0) throw DomainError("energy: r_max must be positive");
    if (quadrature_points < 8) quadrature_points = 8;
    if (quadrature_points % 2) ++quadrature_points;

    // Refuse slices that cross the singular set inside (0, r_max].
    bool have_descriptor = true;
    try {
        auto d = singular_set(fam);
        using K = SingularComponent::Kind;
        for (const auto& comp : d.components) {
            switch (comp.kind) {
                case K::TimeLine:
                    if (std::abs(t0 - comp.t0) < 1e-12)
                        throw DomainError("energy: slice lies on a singular time line");
                    break;
                case K::Axis:
                    break; // handled by the origin classification
                case K::Radius:
                    if (comp.r0 > 0 && comp.r0 <= r_max)
                        throw DomainError("energy: slice crosses a singular radius");
                    break;
                case K::LightCone: {
                    double rc = std::abs(t0 - comp.t0);
                    bool on_half = comp.half == SingularComponent::Half::Full ||
                                   (comp.half == SingularComponent::Half::Future && t0 >= comp.t0) ||
                                   (comp.half == SingularComponent::Half::Past && t0 <= comp.t0);
                    if (on_half && rc > 0 && rc <= r_max)
                        throw DomainError("energy: slice crosses a light cone");
                    break;
                }
                case K::Hyperbola: {
                    double lhs = std::abs(t0 - comp.t_center);
                    if (lhs >= comp.t_star) {
                        double rc = std::sqrt(lhs * lhs - comp.t_star * comp.t_star);
                        if (rc > 0 && rc <= r_max)
                            throw DomainError("energy: slice crosses the blow-up hyperbola");
                    }
                    break;
                }
            }
        }
    } catch (const UnsupportedParams&) {
        have_descriptor = false;
    }
    if (!have_descriptor) {
        // probe the base sign along the slice
        for (int i = 1; i <= 512; ++i) {
            double r = r_max * i / 512.0;
            if (family_base(fam, t0, r) <= 0)
                throw DomainError("energy: slice leaves the validity domain");
        }
    }

    AsymptoticInfo asym = asymptotics(fam);
    EnergyResult res;
    res.integrand_tail_exponent = integrand_exponent(asym, fam.params, /*tail=*/true);
    res.tail = (asym.tail_valid && res.integrand_tail_exponent < -1.0)
                   ? TailClass::Convergent
                   : TailClass::Divergent;
    if (asym.origin_regular) {
        res.origin = TailClass::Convergent;
    } else {
        double m0 = integrand_exponent(asym, fam.params, /*tail=*/false);
        res.origin = (m0 > -1.0) ? TailClass::Convergent : TailClass::Divergent;
    }
    res.finite = res.tail == TailClass::Convergent && res.origin == TailClass::Convergent;

    if (res.origin == TailClass::Divergent) {
        res.value = kInf;
        return res;
    }

    // Composite Simpson over [0, r_max]; the integrand extends by 0 at r=0.
    const int m = quadrature_points;
    const double h = r_max / m;
    const double q = fam.params.q;
    EvalOptions opts;
    opts.singular_guard = 0; // crossings were excluded above
    auto integrand = [&](double r) -> double {
        if (r <= 0) return 0.0;
        Jet2Sample s = evaluate(fam, t0, r, opts);
        double pot = fam.params.k * real_pow(s.u, q + 1) / (q + 1);
        return (0.5 * s.u_t * s.u_t + 0.5 * s.u_r * s.u_r - pot) * real_pow(r, double(fam.params.n - 1));
    };
    double acc = integrand(0.0) + integrand(r_max);
    for (int i = 1; i < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    res.value = acc * h / 3.0;
    return res;
}

nlohmann::json family_table_json() {
    nlohmann::json arr = nlohmann::json::array();
    struct Row {
        FamilyId id;
        const char* formula;
        const char* constants;
        const char* singular;
    };
    const Row rows[] = {
        {FamilyId::U1, "(b*sqrt(k/(2(q+1)))*(q-1)*(t+c))^(2/(1-q))", "c, branch", "time line t=-c (unless smooth power)"},
        {FamilyId::U2, "(k(q-1)^2/(2(q(1-n)+n+1))*((t+c)^2-r^2))^(1/(1-q))", "c", "light cone r=|t+c|"},
        {FamilyId::U3, "(b*sqrt(-k)(n-3)/(n-2)^(3/2)*r + c*r^(3-n))^((n-2)/(n-3))", "c, branch", "axis (c!=0); zero radius when -c/a>0"},
        {FamilyId::U4, "(k/((n-2)(n-3))*(c+b*t-r)*r)^(2-n)", "c, branch", "axis; characteristic ray r=b*t+c"},
        {FamilyId::U5, "sqrt(b*2*sqrt(-k)*t*(1+c*t))", "c, branch", "time lines t=0 and t=-1/c (u_t singular)"},
        {FamilyId::U6, "(b*2*sqrt(k/(n^2-1))*t + c*(t^2-r^2))^((1-n)/2)", "c, branch", "hyperbola |t-tc|=sqrt(r^2+t*^2); time line when c=0"},
        {FamilyId::U7, "(4k/(n-1)^2*(r^2-t^2)*(1+2ct+c^2(t^2-r^2)))^((1-n)/4)", "c", "light cones r=|t| and r=|t+1/c|"},
        {FamilyId::U8, "(4k/(n-1)^2*(t^2 -b/4*(1/c + b*c*(t^2-r^2))^2))^((1-n)/4)", "c, branch", "branch +: cones r=|t±1/c|; branch -: empty"},
        {FamilyId::U9, "(4k/(n-1)^2*(b*r^2 + 1/4*(c(t^2-r^2) + b*(1+2ct*t+ct^2(t^2-r^2))/c)^2))^((1-n)/4)", "c, c_tilde, branch", "branch +: empty; branch -: quartic (unsupported descriptor)"},
        {FamilyId::IV1, "(n(n-2)/(4k))^((n-2)/4) * t^(1-n/2)", "", "time line t=0"},
        {FamilyId::IV2, "(n(n-2)/(4k))^((n-2)/4) * (r^2-t^2)^((2-n)/4)", "", "light cone r=|t|"},
        {FamilyId::IV3, "(b*n(n-2)/k)^((n-2)/4) * (r^2+b)^(1-n/2)", "branch", "branch -: radius r=1; branch +: empty"},
        {FamilyId::IV4, "(b*(n-3)/(n-2)*sqrt(k/(2-n)))^((n-2)/(n-3)) * r^((n-2)/(n-3))", "branch", "axis (unless smooth power)"},
        {FamilyId::IV5, "((n-2)/(2 sqrt(k)))^((n-2)/2) * r^(1-n/2)", "", "axis"},
        {FamilyId::IV6, "((n-1)(n-3)/(4k))^((n-1)/4) * r^((1-n)/2)", "", "axis"},
    };
    for (const auto& row : rows) {
        SolutionFamily probe;
        probe.id = row.id;
        nlohmann::json j;
        j["id"] = family_name(row.id);
        j["formula"] = row.formula;
        j["constraints"] = family_constraint_text(row.id);
        j["constants"] = row.constants;
        j["singular_set"] = row.singular;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace radialwave
