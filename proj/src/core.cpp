#include "radialwave/core.hpp"

#include <cmath>

namespace radialwave {

ModelParams::ModelParams(int n_, double q_, int k_) : n(n_), q(q_), k(k_) {
    if (n < 2) throw UnsupportedParams("ModelParams: dimension n must be >= 2");
    if (q == 1.0) throw UnsupportedParams("ModelParams: q = 1 (linear equation) is excluded");
    if (k != 1 && k != -1) throw UnsupportedParams("ModelParams: k must be +1 or -1");
    if (!std::isfinite(q)) throw UnsupportedParams("ModelParams: q must be finite");
}

double exponent_p(const ModelParams& params) {
    if (params.q == 1.0) throw UnsupportedParams("exponent_p: q = 1 excluded");
    return 2.0 / (1.0 - params.q);
}

double critical_power(int n) {
    if (n == 2) throw UnsupportedParams("critical power undefined for n = 2");
    return static_cast<double>(n + 2) / (n - 2);
}
double conformal_power(int n) { return static_cast<double>(n + 3) / (n - 1); }
double inverse_dilation_power(int n) {
    if (n == 2) throw UnsupportedParams("inverse-dilation power undefined for n = 2");
    return static_cast<double>(4 - n) / (n - 2);
}
double static_line_power(int n) {
    if (n == 2) throw UnsupportedParams("static-line power undefined for n = 2");
    return static_cast<double>(n - 1) / (n - 2);
}

std::vector<SpecialPowerMatch> classify_power(const ModelParams& params) {
    std::vector<SpecialPowerMatch> out;
    auto match = [&](SpecialPower kind, double value) {
        if (std::abs(params.q - value) < kPowerClassifyTol) out.push_back({kind, value});
    };
    if (params.n != 2) match(SpecialPower::Critical, critical_power(params.n));
    match(SpecialPower::Conformal, conformal_power(params.n));
    if (params.n != 2) {
        // q = 1 variants of these relations are already excluded by ModelParams
        double qid = inverse_dilation_power(params.n);
        if (qid != 1.0) match(SpecialPower::InverseDilation, qid);
        double qsl = static_line_power(params.n);
        if (qsl != 1.0) match(SpecialPower::StaticLine, qsl);
    }
    match(SpecialPower::MinusThree, -3.0);
    return out;
}

const char* special_power_name(SpecialPower kind) {
    switch (kind) {
        case SpecialPower::Critical: return "critical";
        case SpecialPower::Conformal: return "conformal";
        case SpecialPower::InverseDilation: return "inverse-dilation";
        case SpecialPower::StaticLine: return "static-line";
        case SpecialPower::MinusThree: return "minus-three";
        case SpecialPower::Generic: return "generic";
    }
    return "?";
}

} // namespace radialwave
