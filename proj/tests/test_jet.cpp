#include "doctest.h"

#include <cmath>
#include <functional>

#include "radialwave/jet.hpp"

using namespace radialwave;

namespace {

// finite-difference oracle for jet derivatives
struct FD {
    std::function<double(double, double)> f;
    double h;
    double da(double a, double b) const { return (f(a + h, b) - f(a - h, b)) / (2 * h); }
    double db(double a, double b) const { return (f(a, b + h) - f(a, b - h)) / (2 * h); }
    double daa(double a, double b) const {
        return (f(a + h, b) - 2 * f(a, b) + f(a - h, b)) / (h * h);
    }
    double dbb(double a, double b) const {
        return (f(a, b + h) - 2 * f(a, b) + f(a, b - h)) / (h * h);
    }
    double dab(double a, double b) const {
        return (f(a + h, b + h) - f(a + h, b - h) - f(a - h, b + h) + f(a - h, b - h)) /
               (4 * h * h);
    }
};

Jet2 expr(double a, double b) {
    Jet2 A = Jet2::var_a(a), B = Jet2::var_b(b);
    return jexp(jsin(A) * 0.3 + B * 0.1) / (1.0 + A * A) + jpow(B, 1.7) * jtanh(A) +
           jsqrt(2.0 + A * B) - jlog(3.0 + A + B) + jatan(A - B) + jpow_int(A + 2.0 * B, 3);
}

double expr_val(double a, double b) { return expr(a, b).f; }

} // namespace

TEST_CASE("jet arithmetic matches a finite-difference oracle") {
    FD fd1{expr_val, 1e-6}; // first derivatives: truncation ~h^2
    FD fd2{expr_val, 1e-4}; // second derivatives: balance truncation vs cancellation
    for (auto [a, b] : {std::pair{0.7, 1.3}, {1.9, 0.4}, {0.2, 2.5}}) {
        Jet2 j = expr(a, b);
        CHECK(j.fa == doctest::Approx(fd1.da(a, b)).epsilon(1e-8));
        CHECK(j.fb == doctest::Approx(fd1.db(a, b)).epsilon(1e-8));
        CHECK(j.faa == doctest::Approx(fd2.daa(a, b)).epsilon(1e-6));
        CHECK(j.fbb == doctest::Approx(fd2.dbb(a, b)).epsilon(1e-6));
        CHECK(j.fab == doctest::Approx(fd2.dab(a, b)).epsilon(1e-6));
    }
}

TEST_CASE("integer powers keep sign and exactness") {
    Jet2 A = Jet2::var_a(-2.0);
    Jet2 p = jpow(A, 3.0);
    CHECK(p.f == -8.0);
    CHECK(p.fa == 12.0);
    CHECK(p.faa == -12.0);
    Jet2 m = jpow(A, -2.0);
    CHECK(m.f == doctest::Approx(0.25));
}

TEST_CASE("fractional power of non-positive base is a domain error") {
    Jet2 A = Jet2::var_a(-1.0);
    CHECK_THROWS_AS(jpow(A, 0.5), DomainError);
    CHECK_THROWS_AS(jlog(A), DomainError);
    CHECK_THROWS_AS(jsqrt(Jet2::constant(-3.0)), DomainError);
    CHECK_THROWS_AS(real_pow(-1.0, 0.5), DomainError);
    CHECK(real_pow(-2.0, 3.0) == -8.0);
}

TEST_CASE("division and chain rule identities") {
    Jet2 A = Jet2::var_a(1.2), B = Jet2::var_b(0.8);
    Jet2 x = (A * B + 1.0);
    Jet2 y = x / x;
    CHECK(y.f == doctest::Approx(1.0));
    CHECK(y.fa == doctest::Approx(0.0));
    CHECK(y.faa == doctest::Approx(0.0));
    Jet2 z = jexp(jlog(x)) - x;
    CHECK(std::abs(z.f) < 1e-14);
    CHECK(std::abs(z.fa) < 1e-14);
    CHECK(std::abs(z.fbb) < 1e-13);
}
