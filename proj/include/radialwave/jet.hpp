#pragma once

// Second-order truncated Taylor (jet) arithmetic in two independent variables.
// Used by the catalog and foliation modules to get derivatives of closed-form
// expressions exact to rounding; finite differences are banned for residual
// certification.

#include <cmath>
#include <cstdint>
#include <string>

#include "radialwave/core.hpp"

namespace radialwave {

struct Jet2 {
    double f = 0;   // value
    double fa = 0;  // d/da
    double fb = 0;  // d/db
    double faa = 0; // d2/da2
    double fab = 0; // d2/dadb
    double fbb = 0; // d2/db2

    static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }
    static Jet2 var_a(double a0) { return {a0, 1, 0, 0, 0, 0}; }
    static Jet2 var_b(double b0) { return {b0, 0, 1, 0, 0, 0}; }
};

inline Jet2 operator+(const Jet2& x, const Jet2& y) {
    return {x.f + y.f, x.fa + y.fa, x.fb + y.fb, x.faa + y.faa, x.fab + y.fab, x.fbb + y.fbb};
}
inline Jet2 operator-(const Jet2& x, const Jet2& y) {
    return {x.f - y.f, x.fa - y.fa, x.fb - y.fb, x.faa - y.faa, x.fab - y.fab, x.fbb - y.fbb};
}
inline Jet2 operator-(const Jet2& x) { return {-x.f, -x.fa, -x.fb, -x.faa, -x.fab, -x.fbb}; }
inline Jet2 operator*(const Jet2& x, const Jet2& y) {
    return {x.f * y.f,
            x.fa * y.f + x.f * y.fa,
            x.fb * y.f + x.f * y.fb,
            x.faa * y.f + 2 * x.fa * y.fa + x.f * y.faa,
            x.fab * y.f + x.fa * y.fb + x.fb * y.fa + x.f * y.fab,
            x.fbb * y.f + 2 * x.fb * y.fb + x.f * y.fbb};
}
inline Jet2 operator+(const Jet2& x, double c) { return x + Jet2::constant(c); }
inline Jet2 operator+(double c, const Jet2& x) { return x + Jet2::constant(c); }
inline Jet2 operator-(const Jet2& x, double c) { return x - Jet2::constant(c); }
inline Jet2 operator-(double c, const Jet2& x) { return Jet2::constant(c) - x; }
inline Jet2 operator*(const Jet2& x, double c) { return {x.f * c, x.fa * c, x.fb * c, x.faa * c, x.fab * c, x.fbb * c}; }
inline Jet2 operator*(double c, const Jet2& x) { return x * c; }

/// Chain rule: given outer values g(f), g'(f), g''(f), compose with the jet.
inline Jet2 jcompose(const Jet2& x, double g, double dg, double d2g) {
    return {g,
            dg * x.fa,
            dg * x.fb,
            dg * x.faa + d2g * x.fa * x.fa,
            dg * x.fab + d2g * x.fa * x.fb,
            dg * x.fbb + d2g * x.fb * x.fb};
}

inline Jet2 jrecip(const Jet2& x) {
    if (x.f == 0) throw DomainError("jet: division by zero");
    double inv = 1.0 / x.f;
    return jcompose(x, inv, -inv * inv, 2 * inv * inv * inv);
}
inline Jet2 operator/(const Jet2& x, const Jet2& y) { return x * jrecip(y); }
inline Jet2 operator/(const Jet2& x, double c) { return x * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& x) { return jrecip(x) * c; }

inline Jet2 jexp(const Jet2& x) {
    double e = std::exp(x.f);
    return jcompose(x, e, e, e);
}
inline Jet2 jlog(const Jet2& x) {
    if (x.f <= 0) throw DomainError("jet: log of non-positive value");
    return jcompose(x, std::log(x.f), 1.0 / x.f, -1.0 / (x.f * x.f));
}
inline Jet2 jsqrt(const Jet2& x) {
    if (x.f <= 0) throw DomainError("jet: sqrt of non-positive value");
    double s = std::sqrt(x.f);
    return jcompose(x, s, 0.5 / s, -0.25 / (s * x.f));
}
inline Jet2 jtanh(const Jet2& x) {
    double th = std::tanh(x.f);
    double sech2 = 1 - th * th;
    return jcompose(x, th, sech2, -2 * th * sech2);
}
inline Jet2 jatan(const Jet2& x) {
    double d = 1 + x.f * x.f;
    return jcompose(x, std::atan(x.f), 1 / d, -2 * x.f / (d * d));
}
inline Jet2 jsin(const Jet2& x) { return jcompose(x, std::sin(x.f), std::cos(x.f), -std::sin(x.f)); }
inline Jet2 jcos(const Jet2& x) { return jcompose(x, std::cos(x.f), -std::sin(x.f), -std::cos(x.f)); }

/// Integer power by repeated multiplication: preserves sign, exact for
/// small integer exponents, valid for any base.
inline Jet2 jpow_int(const Jet2& x, long long e) {
    if (e == 0) return Jet2::constant(1.0);
    if (e < 0) return jrecip(jpow_int(x, -e));
    Jet2 acc = Jet2::constant(1.0);
    Jet2 base = x;
    long long m = e;
    while (m > 0) {
        if (m & 1) acc = acc * base;
        base = base * base;
        m >>= 1;
    }
    return acc;
}

inline bool nearly_integer(double e, long long& out) {
    double rounded = std::nearbyint(e);
    if (std::abs(e - rounded) < 1e-9 && std::abs(rounded) < 1e15) {
        out = static_cast<long long>(rounded);
        return true;
    }
    return false;
}

/// Real power.  a > 0 goes through exp(e ln a); integer exponents use
/// repeated multiplication; a <= 0 with non-integer e is a DomainError.
inline Jet2 jpow(const Jet2& x, double e) {
    long long ei = 0;
    if (nearly_integer(e, ei)) return jpow_int(x, ei);
    if (x.f <= 0) throw DomainError("jet: fractional power of non-positive base");
    double g = std::pow(x.f, e);
    double dg = e * g / x.f;
    double d2g = e * (e - 1) * g / (x.f * x.f);
    return jcompose(x, g, dg, d2g);
}

/// Scalar counterpart of jpow's real-power convention.
inline double real_pow(double a, double e) {
    long long ei = 0;
    if (nearly_integer(e, ei)) {
        double acc = 1.0;
        double base = ei < 0 ? 1.0 / a : a;
        long long m = ei < 0 ? -ei : ei;
        while (m > 0) {
            if (m & 1) acc *= base;
            base *= base;
            m >>= 1;
        }
        return acc;
    }
    if (a == 0 && e > 0) return 0.0;
    if (a <= 0) throw DomainError("fractional power of non-positive base");
    return std::exp(e * std::log(a));
}

} // namespace radialwave
