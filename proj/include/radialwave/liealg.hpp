#pragma once

// Exact polynomial vector-field algebra for the point-symmetry generators,
// Lie brackets with rational coefficients, one-parameter group actions on
// solutions, and the special conformal involution.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "radialwave/catalog.hpp"
#include "radialwave/core.hpp"

namespace radialwave {

/// Exact rational arithmetic for the symmetry algebra.  (boost::rational
/// 1.74 is unusable here: its heterogeneous operator== recurses infinitely
/// under C++20 rewritten comparisons.)
class Rational {
  public:
    constexpr Rational() = default;
    constexpr Rational(long long n) : num_(n) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long numerator() const { return num_; }
    long long denominator() const { return den_; }

    Rational operator+(const Rational& o) const {
        return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
    }
    Rational operator-(const Rational& o) const {
        return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
    }
    Rational operator*(const Rational& o) const { return {num_ * o.num_, den_ * o.den_}; }
    Rational operator/(const Rational& o) const { return {num_ * o.den_, den_ * o.num_}; }
    Rational operator-() const { return {-num_, den_}; }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    double to_double() const { return double(num_) / double(den_); }

  private:
    void normalize() {
        if (den_ == 0) throw DomainError("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }
    long long num_ = 0;
    long long den_ = 1;
};

/// Multivariate polynomial in (t, r, u) with exact rational coefficients.
class Poly3 {
  public:
    using Key = std::array<int, 3>; // exponents of t, r, u

    Poly3() = default;
    static Poly3 constant(Rational c);
    static Poly3 monomial(Rational c, int et, int er, int eu);

    Poly3 operator+(const Poly3& o) const;
    Poly3 operator-(const Poly3& o) const;
    Poly3 operator*(const Poly3& o) const;
    Poly3 operator*(const Rational& c) const;
    bool operator==(const Poly3& o) const;
    bool is_zero() const;

    Poly3 derivative(int var) const; // 0 = t, 1 = r, 2 = u

    const std::map<Key, Rational>& terms() const { return terms_; }
    std::string str() const;

  private:
    void prune();
    std::map<Key, Rational> terms_;
};

struct PolyVectorField {
    Poly3 coeff_t, coeff_r, coeff_u;

    PolyVectorField operator+(const PolyVectorField& o) const;
    PolyVectorField operator-(const PolyVectorField& o) const;
    PolyVectorField operator*(const Rational& c) const;
    bool operator==(const PolyVectorField& o) const;
    bool is_zero() const;
    std::string str() const;
};

/// [X, Y] = X(Y) - Y(X), exact on polynomial coefficients.
PolyVectorField lie_bracket(const PolyVectorField& X, const PolyVectorField& Y);

PolyVectorField generator_translation();
/// t d/dt + r d/dr + p u d/du with p = 2/(1-q) carried exactly.
PolyVectorField generator_scaling(Rational p);
/// (t^2+r^2) d/dt + 2rt d/dr + (1-n) t u d/du; only admitted at q = q_c.
PolyVectorField generator_inversion(int n);

/// Conformal-power p = (1-n)/2 as an exact rational.
Rational conformal_p(int n);

nlohmann::json bracket_table_json(int n);

// --- group actions on solutions -------------------------------------------

struct GroupElement {
    enum class Kind { Translation, Scaling, Inversion, Involution };
    Kind kind = Kind::Translation;
    double lambda = 0; // unused for Involution; Scaling requires lambda > 0
};

/// A field with exact jets, e.g. a catalog solution.
using FieldJetFn = std::function<Jet2Sample(double t, double r)>;

FieldJetFn field_of(const SolutionFamily& fam, const EvalOptions& opts = {});

/// Transformed solution value at (t, r).
double apply_group(const GroupElement& g, const FieldJetFn& u, const ModelParams& params,
                   double t, double r);

/// Full jet of the transformed solution (for residual certification).
Jet2Sample apply_group_jet(const GroupElement& g, const FieldJetFn& u,
                           const ModelParams& params, double t, double r);

/// PDE residual of the transformed field at (t, r).
double transformed_residual(const GroupElement& g, const FieldJetFn& u,
                            const ModelParams& params, double t, double r);

struct InversionActionReport {
    double max_deviation = 0;
    int evaluated = 0;
    int domain_errors = 0;
    bool pass = false;
};

/// Verifies that apply_group(Inversion, lambda) realizes the shift
/// v(xi, x) -> v(xi + lambda x, x) in the invariants xi = t/r,
/// x = (t^2-r^2)/r, v = r^{-p} u, pointwise to tol.
InversionActionReport check_inversion_invariant_action(
    const FieldJetFn& u, const ModelParams& params, double lambda,
    std::span<const std::pair<double, double>> sample_points, double tol = 1e-9);

} // namespace radialwave
