#include "radialwave/liealg.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

namespace radialwave {

Poly3 Poly3::constant(Rational c) { return monomial(c, 0, 0, 0); }

Poly3 Poly3::monomial(Rational c, int et, int er, int eu) {
    Poly3 p;
    if (c != 0) p.terms_[{et, er, eu}] = c;
    return p;
}

void Poly3::prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = (it->second == 0) ? terms_.erase(it) : std::next(it);
}

Poly3 Poly3::operator+(const Poly3& o) const {
    Poly3 out = *this;
    for (const auto& [key, c] : o.terms_) out.terms_[key] += c;
    out.prune();
    return out;
}

Poly3 Poly3::operator-(const Poly3& o) const {
    Poly3 out = *this;
    for (const auto& [key, c] : o.terms_) out.terms_[key] -= c;
    out.prune();
    return out;
}

Poly3 Poly3::operator*(const Poly3& o) const {
    Poly3 out;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            out.terms_[{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]}] += ca * cb;
    out.prune();
    return out;
}

Poly3 Poly3::operator*(const Rational& c) const {
    Poly3 out;
    if (c == 0) return out;
    for (const auto& [key, cc] : terms_) out.terms_[key] = cc * c;
    return out;
}

bool Poly3::operator==(const Poly3& o) const { return terms_ == o.terms_; }
bool Poly3::is_zero() const { return terms_.empty(); }

Poly3 Poly3::derivative(int var) const {
    Poly3 out;
    for (const auto& [key, c] : terms_) {
        if (key[var] == 0) continue;
        Key k = key;
        Rational nc = c * Rational(key[var]);
        k[var] -= 1;
        out.terms_[k] += nc;
    }
    out.prune();
    return out;
}

std::string Poly3::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    const char* names[3] = {"t", "r", "u"};
    for (const auto& [key, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.numerator();
        if (c.denominator() != 1) os << "/" << c.denominator();
        for (int v = 0; v < 3; ++v) {
            if (key[v] == 0) continue;
            os << "*" << names[v];
            if (key[v] > 1) os << "^" << key[v];
        }
    }
    return os.str();
}

PolyVectorField PolyVectorField::operator+(const PolyVectorField& o) const {
    return {coeff_t + o.coeff_t, coeff_r + o.coeff_r, coeff_u + o.coeff_u};
}
PolyVectorField PolyVectorField::operator-(const PolyVectorField& o) const {
    return {coeff_t - o.coeff_t, coeff_r - o.coeff_r, coeff_u - o.coeff_u};
}
PolyVectorField PolyVectorField::operator*(const Rational& c) const {
    return {coeff_t * c, coeff_r * c, coeff_u * c};
}
bool PolyVectorField::operator==(const PolyVectorField& o) const {
    return coeff_t == o.coeff_t && coeff_r == o.coeff_r && coeff_u == o.coeff_u;
}
bool PolyVectorField::is_zero() const {
    return coeff_t.is_zero() && coeff_r.is_zero() && coeff_u.is_zero();
}
std::string PolyVectorField::str() const {
    return "(" + coeff_t.str() + ") d/dt + (" + coeff_r.str() + ") d/dr + (" +
           coeff_u.str() + ") d/du";
}

PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y) {
    auto apply = [](const PolyVectorField& A, const Poly3& f) {
        return A.coeff_t * f.derivative(0) + A.coeff_r * f.derivative(1) +
               A.coeff_u * f.derivative(2);
    };
    return {apply(X, Y.coeff_t) - apply(Y, X.coeff_t),
            apply(X, Y.coeff_r) - apply(Y, X.coeff_r),
            apply(X, Y.coeff_u) - apply(Y, X.coeff_u)};
}

PolyVectorField generator_translation() {
    return {Poly3::constant(1), Poly3(), Poly3()};
}

PolyVectorField generator_scaling(Rational p) {
    return {Poly3::monomial(1, 1, 0, 0), Poly3::monomial(1, 0, 1, 0),
            Poly3::monomial(p, 0, 0, 1)};
}

PolyVectorField generator_inversion(int n) {
    Poly3 ct = Poly3::monomial(1, 2, 0, 0) + Poly3::monomial(1, 0, 2, 0);
    Poly3 cr = Poly3::monomial(2, 1, 1, 0);
    Poly3 cu = Poly3::monomial(Rational(1 - n), 1, 0, 1);
    return {ct, cr, cu};
}

Rational conformal_p(int n) { return Rational(1 - n, 2); }

nlohmann::json bracket_table_json(int n) {
    PolyVectorField Xt = generator_translation();
    PolyVectorField Xs = generator_scaling(conformal_p(n));
    PolyVectorField Xi = generator_inversion(n);
    const char* names[3] = {"X_trans", "X_scal", "X_inver"};
    PolyVectorField gens[3] = {Xt, Xs, Xi};
    nlohmann::json out;
    out["n"] = n;
    out["p"] = std::to_string(conformal_p(n).numerator()) + "/" +
               std::to_string(conformal_p(n).denominator());
    nlohmann::json table = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            nlohmann::json cell;
            cell["lhs"] = std::string("[") + names[i] + "," + names[j] + "]";
            cell["result"] = lie_bracket(gens[i], gens[j]).str();
            table.push_back(std::move(cell));
        }
    out["table"] = std::move(table);
    return out;
}

// --- group actions ---------------------------------------------------------

FieldJetFn field_of(const SolutionFamily& fam, const EvalOptions& opts) {
    return [fam, opts](double t, double r) { return evaluate(fam, t, r, opts); };
}

namespace {

/// Compose an outer field jet (second-order partials at the mapped point)
/// with inner maps a(t,r), b(t,r) given as jets, then multiply by M(t,r).
Jet2 compose_field(const Jet2Sample& F, const Jet2& a, const Jet2& b) {
    Jet2 out;
    out.f = F.u;
    out.fa = F.u_t * a.fa + F.u_r * b.fa;
    out.fb = F.u_t * a.fb + F.u_r * b.fb;
    out.faa = F.u_tt * a.fa * a.fa + 2 * F.u_tr * a.fa * b.fa + F.u_rr * b.fa * b.fa +
              F.u_t * a.faa + F.u_r * b.faa;
    out.fab = F.u_tt * a.fa * a.fb + F.u_tr * (a.fa * b.fb + a.fb * b.fa) +
              F.u_rr * b.fa * b.fb + F.u_t * a.fab + F.u_r * b.fab;
    out.fbb = F.u_tt * a.fb * a.fb + 2 * F.u_tr * a.fb * b.fb + F.u_rr * b.fb * b.fb +
              F.u_t * a.fbb + F.u_r * b.fbb;
    return out;
}

Jet2Sample as_sample(const Jet2& u, double t, double r) {
    return {t, r, u.f, u.fa, u.fb, u.faa, u.fab, u.fbb};
}

} // namespace

Jet2Sample apply_group_jet(const GroupElement& g, const FieldJetFn& u,
                           const ModelParams& params, double t, double r) {
    const double p = exponent_p(params);
    const Jet2 T = Jet2::var_a(t);
    const Jet2 R = Jet2::var_b(r);
    switch (g.kind) {
        case GroupElement::Kind::Translation: {
            Jet2Sample F = u(t + g.lambda, r);
            return as_sample(compose_field(F, T + g.lambda, R), t, r);
        }
        case GroupElement::Kind::Scaling: {
            if (g.lambda <= 0) throw DomainError("scaling requires lambda > 0");
            double lam = g.lambda;
            Jet2Sample F = u(lam * t, lam * r);
            Jet2 comp = compose_field(F, lam * T, lam * R);
            return as_sample(std::pow(lam, -p) * comp, t, r);
        }
        case GroupElement::Kind::Inversion: {
            if (!is_conformal(params))
                throw UnsupportedParams("inversion requires the conformal power q = (n+3)/(n-1)");
            double lam = g.lambda;
            Jet2 W = T * T - R * R;
            Jet2 shifted = T + lam * W;
            Jet2 denom = shifted * shifted - R * R;
            if (std::abs(denom.f) < 1e-14 || std::abs(W.f) < 1e-14)
                throw DomainError("inversion: Omega denominator vanishes");
            Jet2 Om = W / denom;
            Jet2 that = Om * shifted;
            Jet2 rhat = Om * R;
            if (rhat.f <= 0) throw DomainError("inversion: mapped point has r <= 0");
            Jet2Sample F = u(that.f, rhat.f);
            Jet2 comp = compose_field(F, that, rhat);
            // group-consistent prefactor Omega_lambda^{-p} (see ledger)
            return as_sample(jpow(Om, -p) * comp, t, r);
        }
        case GroupElement::Kind::Involution: {
            if (!is_conformal(params))
                throw UnsupportedParams("involution requires the conformal power q = (n+3)/(n-1)");
            Jet2 W = T * T - R * R;
            if (std::abs(W.f) < 1e-14) throw DomainError("involution: t^2 = r^2");
            Jet2 that = -T / W;
            Jet2 rhat = R / W;
            if (rhat.f <= 0) throw DomainError("involution: mapped point has r <= 0");
            Jet2Sample F = u(that.f, rhat.f);
            Jet2 comp = compose_field(F, that, rhat);
            return as_sample(jpow(W, p) * comp, t, r);
        }
    }
    throw DomainError("unknown group element");
}

double apply_group(const GroupElement& g, const FieldJetFn& u, const ModelParams& params,
                   double t, double r) {
    return apply_group_jet(g, u, params, t, r).u;
}

double transformed_residual(const GroupElement& g, const FieldJetFn& u,
                            const ModelParams& params, double t, double r) {
    return pde_residual_rel(params, apply_group_jet(g, u, params, t, r));
}

InversionActionReport check_inversion_invariant_action(
    const FieldJetFn& u, const ModelParams& params, double lambda,
    std::span<const std::pair<double, double>> sample_points, double tol) {
    if (!is_conformal(params))
        throw UnsupportedParams("inversion action requires the conformal power");
    const double p = exponent_p(params);
    InversionActionReport rep;
    GroupElement inv{GroupElement::Kind::Inversion, lambda};
    for (auto [t, r] : sample_points) {
        try {
            if (r <= 0) throw DomainError("r must be positive");
            double xi = t / r;
            double x = (t * t - r * r) / r;
            // route 1: v at the shifted invariant point (xi + lambda x, x)
            double xi2 = xi + lambda * x;
            // solve (xi2, x) back to a space-time point: x = (xi2^2 - 1) r2
            double denom = xi2 * xi2 - 1.0;
            if (std::abs(denom) < 1e-10) throw DomainError("shifted point hits xi^2 = 1");
            double r2 = x / denom;
            if (r2 <= 0) throw DomainError("shifted point leaves r > 0");
            double t2 = xi2 * r2;
            double v_shift = std::pow(r2, -p) * u(t2, r2).u;
            // route 2: the transformed solution evaluated at the original point
            double v_group = std::pow(r, -p) * apply_group(inv, u, params, t, r);
            rep.max_deviation = std::max(rep.max_deviation, std::abs(v_shift - v_group));
            ++rep.evaluated;
        } catch (const DomainError&) {
            ++rep.domain_errors;
        }
    }
    rep.pass = rep.evaluated > 0 && rep.max_deviation < tol;
    return rep;
}

} // namespace radialwave
