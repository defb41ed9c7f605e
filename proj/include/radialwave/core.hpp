#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace radialwave {

// Errors shared across modules.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};
struct UnsupportedParams : std::runtime_error {
    explicit UnsupportedParams(const std::string& what) : std::runtime_error(what) {}
};
struct PathSingular : std::runtime_error {
    explicit PathSingular(const std::string& what) : std::runtime_error(what) {}
};
struct CompatibilityError : std::runtime_error {
    explicit CompatibilityError(const std::string& what) : std::runtime_error(what) {}
};
struct NonMonotone : std::runtime_error {
    explicit NonMonotone(const std::string& what) : std::runtime_error(what) {}
};
struct InsufficientWindow : std::runtime_error {
    explicit InsufficientWindow(const std::string& what) : std::runtime_error(what) {}
};
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Model parameters of u_tt - u_rr - (n-1)u_r/r = k u^q.
struct ModelParams {
    int n = 3;      // spatial dimension, n >= 2
    double q = 3.0; // nonlinearity power, q != 1
    int k = +1;     // sign of the interaction, +1 or -1

    ModelParams() = default;
    ModelParams(int n_, double q_, int k_);
};

/// p = 2/(1-q).  Rejects q = 1.
double exponent_p(const ModelParams& params);

double critical_power(int n);        // (n+2)/(n-2), n != 2
double conformal_power(int n);       // (n+3)/(n-1)
double inverse_dilation_power(int n); // (4-n)/(n-2), n != 2
double static_line_power(int n);     // (n-1)/(n-2), n != 2

enum class SpecialPower {
    Critical,
    Conformal,
    InverseDilation,
    StaticLine,
    MinusThree,
    Generic,
};

struct SpecialPowerMatch {
    SpecialPower kind;
    double value;
};

inline constexpr double kPowerClassifyTol = 1e-12;

/// Every special-power label whose defining relation holds within 1e-12.
/// Empty result means Generic.
std::vector<SpecialPowerMatch> classify_power(const ModelParams& params);

const char* special_power_name(SpecialPower kind);

inline bool is_conformal(const ModelParams& params) {
    return std::abs(params.q - conformal_power(params.n)) < kPowerClassifyTol;
}

inline double rel_error(double got, double want) {
    double scale = std::max(1.0, std::abs(want));
    return std::abs(got - want) / scale;
}

} // namespace radialwave
