#pragma once

// Symmetry-reduced ODE residuals, canonical-coordinate transforms, implicit
// quadrature solutions and the no-extra-symmetry witness of Proposition 4.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "radialwave/core.hpp"

namespace radialwave {

enum class OdeKind {
    Trans,              // U'' + (n-1)U'/x + k U^q = 0,              x = r
    Scal,               // (1-x^2)U'' + ((n-1)/x + 2(p-1)x)U' + p(1-p)U + kU^q = 0,  x = r/t
    ScalAlt,            // (1-x^2)U'' + (2p+n-3)xU' - p(p+n-2)U - kU^q = 0,          x = t/r
    Inver,              // x^2 U'' + 2xU' - p(p+1)U + kU^q = 0,     x = (t^2-r^2)/r
    TransInver,         // (x^2+4)U'' + 2xU' - p(p+1)U + kU^q = 0,  x = (1+t^2-r^2)/r
    TransCanonicalScal, // v'' - pb^2 v + k v^q = 0, pb = 1-n/2, q = q*
    TransCanonicalDil,  // v'' + k v^q = 0,                     q = (4-n)/(n-2)
    ScalCanonicalDil,   // s v'' - pb^2 v + k v^q = 0,          q = q*
    InverCanonical,     // v'' + v' - p(p+1)v + k v^q = 0,      q = q_c
};

const char* ode_name(OdeKind kind);

struct ReducedODE {
    OdeKind kind = OdeKind::Trans;
    ModelParams params;
    int s = +1; // sign field sgn(1-xi^2) for ScalCanonicalDil

    ReducedODE(OdeKind kind_, ModelParams params_, int s_ = +1);
};

/// Left-hand side of the ODE at (x, v, v', v'').  Zero for exact solutions.
double ode_residual(const ReducedODE& ode, double x, double v, double v1, double v2);

// --- canonical coordinate maps -----------------------------------------------

struct CanonicalPoint {
    double x = 0, v = 0;
};

/// Forward map (r_or_xi, U) -> (x, v) for the canonical kinds.
CanonicalPoint canonical_forward(OdeKind kind, const ModelParams& params, double r_or_xi,
                                 double U);
/// Inverse map (x, v) -> (r_or_xi, U); forward o inverse = id to 1e-12.
std::pair<double, double> canonical_inverse(OdeKind kind, const ModelParams& params,
                                            double x, double v);

// --- implicit quadrature solutions ---------------------------------------------

enum class QuadKind { TransScal, TransDil, ScalDil };
const char* quad_name(QuadKind kind);

struct QuadratureFamily {
    QuadKind kind = QuadKind::TransScal;
    ModelParams params;
    double c = 0;       // oscillator-energy constant
    double c_tilde = 0; // additive shift of x
    int branch = +1;    // sign of dx/dv
    int s = +1;         // ScalDil only

    QuadratureFamily(QuadKind kind_, ModelParams params_, double c_, double c_tilde_ = 0,
                     int branch_ = +1, int s_ = +1);
};

/// Radicand under the square root of the quadrature integrand.
double quad_radicand(const QuadratureFamily& fam, double v);

/// x(v) tabulated by adaptive quadrature (abs tol 1e-10) with square-root
/// substitution at endpoint turning points, and the monotone inverse v(x).
class QuadratureSolution {
  public:
    QuadratureSolution(const QuadratureFamily& fam, double v_lo, double v_hi);

    double x_of_v(double v) const;
    double v_of_x(double x) const;

    double x_min() const { return x_lo_; }
    double x_max() const { return x_hi_; }
    double v_lo() const { return v_lo_; }
    double v_hi() const { return v_hi_; }
    bool turning_at_lo() const { return turning_lo_; }
    bool turning_at_hi() const { return turning_hi_; }

    const QuadratureFamily& family() const { return fam_; }
    /// residual of the canonical ODE at x, via 5-point differences of v(x)
    double inverse_ode_residual(double x, double h = 0) const;

    /// (v, x) table rows for CSV export
    std::vector<std::pair<double, double>> table() const;

  private:
    double integrate_segment(double va, double vb) const;

    QuadratureFamily fam_;
    double v_lo_ = 0, v_hi_ = 0;
    double x_lo_ = 0, x_hi_ = 0;
    bool turning_lo_ = false, turning_hi_ = false;
    std::vector<double> vs_, xs_; // cumulative nodes, vs_ ascending
};

QuadratureSolution quadrature_solve(const QuadratureFamily& fam, double v_lo, double v_hi);

/// The c = 0 closed forms the quadratures reproduce (with corrected
/// power-law coefficient; see ledger).
double quad_closed_form_c0(const QuadratureFamily& fam, double x);

// --- Proposition 4 witness -------------------------------------------------------

struct SymmetryDefect {
    std::string candidate;
    double defect = 0; // multiplier-consistency defect across test functions
};

struct NoSymmetryReport {
    int n = 0;
    std::vector<SymmetryDefect> inver;      // candidates applied to the Inver ODE
    std::vector<SymmetryDefect> transinver; // candidates applied to the TransInver ODE
    bool pass = false; // identity/xi-scaling invariances hold exactly where expected,
                       // and every nontrivial candidate on TransInver has an O(1) defect
};

NoSymmetryReport no_symmetry_witness(int n, double lambda = 2.0, double epsilon = 0.1);

} // namespace radialwave
