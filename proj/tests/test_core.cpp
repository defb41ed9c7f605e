#include "doctest.h"

#include "radialwave/core.hpp"

using namespace radialwave;

namespace {

bool has(const std::vector<SpecialPowerMatch>& v, SpecialPower kind) {
    for (const auto& m : v)
        if (m.kind == kind) return true;
    return false;
}

} // namespace

TEST_CASE("model params validation") {
    CHECK_NOTHROW(ModelParams(3, 3.0, 1));
    CHECK_THROWS_AS(ModelParams(1, 3.0, 1), UnsupportedParams);
    CHECK_THROWS_AS(ModelParams(3, 1.0, 1), UnsupportedParams);
    CHECK_THROWS_AS(ModelParams(3, 3.0, 2), UnsupportedParams);
}

TEST_CASE("exponent p") {
    CHECK(exponent_p(ModelParams(3, 3.0, 1)) == doctest::Approx(-1.0));
    CHECK(exponent_p(ModelParams(3, -1.0, 1)) == doctest::Approx(1.0));
    // q = q_c gives p = (1-n)/2
    CHECK(exponent_p(ModelParams(3, conformal_power(3), 1)) == doctest::Approx(-1.0));
}

TEST_CASE("classification examples") {
    auto c1 = classify_power(ModelParams(3, 5.0, 1));
    CHECK(c1.size() == 1);
    CHECK(has(c1, SpecialPower::Critical));

    auto c2 = classify_power(ModelParams(3, 3.0, 1));
    CHECK(c2.size() == 1);
    CHECK(has(c2, SpecialPower::Conformal));

    auto c3 = classify_power(ModelParams(5, 2.0, 1));
    CHECK(c3.size() == 1);
    CHECK(has(c3, SpecialPower::Conformal)); // (n-1)/(n-2) = 4/3 != 2

    auto c4 = classify_power(ModelParams(4, 0.0, 1));
    CHECK(c4.size() == 1);
    CHECK(has(c4, SpecialPower::InverseDilation));

    auto generic = classify_power(ModelParams(3, 2.2, 1));
    CHECK(generic.empty());
}

TEST_CASE("p(q_c) = (1-n)/2 identity over n = 2..10") {
    for (int n = 2; n <= 10; ++n) {
        double qc = conformal_power(n);
        CHECK(exponent_p(ModelParams(n, qc, 1)) ==
              doctest::Approx((1.0 - n) / 2).epsilon(1e-14));
    }
}

TEST_CASE("classification stable under < 1e-13 perturbation") {
    for (int n : {3, 4, 5, 6, 10}) {
        double qc = conformal_power(n);
        for (double eps : {0.0, 9e-14, -9e-14}) {
            auto c = classify_power(ModelParams(n, qc + eps, 1));
            CHECK(has(c, SpecialPower::Conformal));
        }
    }
}

TEST_CASE("special powers mutually exclusive for integer n") {
    for (int n = 2; n <= 64; ++n) {
        double candidates[] = {-3.0, n == 2 ? -3.0 : critical_power(n), conformal_power(n)};
        for (double q : candidates) {
            if (q == 1.0) continue;
            auto c = classify_power(ModelParams(n, q, 1));
            CHECK(c.size() <= 1);
        }
    }
}
