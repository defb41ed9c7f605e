#pragma once

// Closed-form exact solution families of u_tt - u_rr - (n-1)u_r/r = k u^q
// with Taylor-jet evaluation of u and its partials through second order,
// singular-set descriptors, residual certification and energy classification.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "radialwave/core.hpp"
#include "radialwave/jet.hpp"

namespace radialwave {

enum class FamilyId {
    U1, U2, U3, U4, U5, U6, U7, U8, U9,
    IV1, IV2, IV3, IV4, IV5, IV6,
};

const char* family_name(FamilyId id);
std::optional<FamilyId> family_from_name(const std::string& name);
inline constexpr int kFamilyCount = 15;
std::vector<FamilyId> all_families();

struct SolutionFamily {
    FamilyId id = FamilyId::U1;
    ModelParams params;
    double c = 0.0;
    double c_tilde = 0.0; // U9 only
    int branch = +1;      // selects the +- sign where the formula carries one
    double t_shift = 0.0; // global time translation (U5..U9 orbit freedom)
    bool as_printed = false; // IV6: evaluate the paper's 2*sqrt(k) variant (documented erratum)
};

struct Jet2Sample {
    double t = 0, r = 0;
    double u = 0, u_t = 0, u_r = 0, u_tt = 0, u_tr = 0, u_rr = 0;
};

/// Throws UnsupportedParams unless (n,q,k) and the constants satisfy the
/// family's side conditions.
void require_constraints(const SolutionFamily& fam);
bool constraints_ok(const SolutionFamily& fam);
/// Human-readable side condition, for the catalog table.
std::string family_constraint_text(FamilyId id);

/// The expression under the outer power, as a jet.  Exposed because the
/// validity domain of every family is base > 0.
Jet2 family_base_jet(const SolutionFamily& fam, double t, double r);
double family_base(const SolutionFamily& fam, double t, double r);
/// Outer exponent of the closed form (u = base^e, or u = branch*sqrt(base) for U5).
double family_exponent(const SolutionFamily& fam);

struct EvalOptions {
    double singular_guard = 1e-8; // relative distance below which evaluate() refuses
};

Jet2Sample evaluate(const SolutionFamily& fam, double t, double r,
                    const EvalOptions& opts = {});

/// PDE residual |u_tt - u_rr - (n-1)u_r/r - k u^q| / max(1, |k u^q|).
double pde_residual_rel(const SolutionFamily& fam, double t, double r,
                        const EvalOptions& opts = {});
double pde_residual_rel(const ModelParams& params, const Jet2Sample& s);

// --- singular sets -----------------------------------------------------

struct SingularComponent {
    enum class Kind { TimeLine, Axis, LightCone, Hyperbola, Radius };
    enum class Half { Full, Future, Past }; // for LightCone rays
    Kind kind = Kind::TimeLine;
    Half half = Half::Full;
    double t0 = 0;     // TimeLine / LightCone vertex
    double t_center = 0; // Hyperbola center
    double t_star = 0;   // Hyperbola offset
    double r0 = 0;       // Radius
};

struct SingularSetDescriptor {
    std::vector<SingularComponent> components;
};

/// Complete singular set as analytic curve components.  Throws
/// UnsupportedParams for U9 branch -, whose singular locus is a quartic
/// curve outside the descriptor language.
SingularSetDescriptor singular_set(const SolutionFamily& fam);

/// Relative distance from (t,r) to the nearest declared component
/// (infinity when the set is empty).
double singular_distance(const SingularSetDescriptor& d, double t, double r);

// --- residual reports ---------------------------------------------------

struct ResidualReport {
    struct Entry {
        double t = 0, r = 0;
        double residual = 0;
        bool domain_error = false;
        std::string note;
    };
    std::vector<Entry> entries;
    double max_residual = 0;
    int evaluated = 0;
    int domain_errors = 0;
    bool pass = false;
    double tol = 0;
};

ResidualReport verify_residual(const SolutionFamily& fam,
                               std::span<const std::pair<double, double>> samples,
                               double tol);

/// Deterministic interior sample points (seeded), rejected against the
/// validity domain and the singular guard.
std::vector<std::pair<double, double>> sample_domain(const SolutionFamily& fam,
                                                     int count, std::uint64_t seed);

// --- energy ---------------------------------------------------------------

enum class TailClass { Convergent, Divergent };

struct EnergyResult {
    bool finite = false;          // false => Infinite
    double value = 0;             // integral over (0, r_max] when finite
    TailClass tail = TailClass::Divergent;
    TailClass origin = TailClass::Divergent;
    double integrand_tail_exponent = 0;
};

/// Energy integral (1/2 u_t^2 + 1/2 u_r^2 - k u^{q+1}/(q+1)) r^{n-1} dr over
/// (0, r_max], composite Simpson, plus tail/origin classification from the
/// family's stored asymptotic exponents.  DomainError if the slice t=t0
/// crosses the singular set in (0, r_max].
EnergyResult energy(const SolutionFamily& fam, double t0, double r_max,
                    int quadrature_points);

/// Stored asymptotic exponents used by energy's classification.
struct AsymptoticInfo {
    double u_tail = 0;    // u ~ r^{u_tail} as r -> inf (t fixed)
    double ut_tail = 0;   // u_t ~ r^{ut_tail}; -inf when u_t == 0
    bool r_dependent = true;
    bool tail_valid = true;   // false when the closed form leaves its real domain at large r
    double u_origin = 0;      // u ~ r^{u_origin} as r -> 0
    double ut_origin = 0;
    bool origin_regular = true;
};
AsymptoticInfo asymptotics(const SolutionFamily& fam);

// --- export -----------------------------------------------------------------

nlohmann::json family_table_json();

} // namespace radialwave
