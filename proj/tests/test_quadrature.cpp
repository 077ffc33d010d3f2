#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "phibvp/quadrature.hpp"

using namespace phibvp;

namespace {

// spec'd brute-force oracle: midpoint rule after the substitution
// xi = 1 - s^2, which flattens the (1 - xi)^{-1/2} endpoint singularity
double midpoint_after_substitution(long panels) {
    // integral_{3/4}^{1} dxi / (sqrt(1 - xi) sqrt(xi)) = int_0^{1/2} 2 ds / sqrt(1 - s^2)
    const double h = 0.5 / static_cast<double>(panels);
    double total = 0.0;
    for (long i = 0; i < panels; ++i) {
        const double s = (static_cast<double>(i) + 0.5) * h;
        total += 2.0 / std::sqrt(1.0 - s * s);
    }
    return total * h;
}

}  // namespace

TEST_CASE("endpoint-singular reference integrals") {
    // int_0^1 x^{-1/2} dx = 2
    CHECK(tanh_sinh([](double, double dlo, double) { return 1.0 / std::sqrt(dlo); }, 0.0, 1.0) ==
          Catch::Approx(2.0).epsilon(1e-12));
    // int_0^1 (1-x)^{-1/3} dx = 3/2
    CHECK(tanh_sinh([](double, double, double dhi) { return std::pow(dhi, -1.0 / 3.0); }, 0.0,
                    1.0) == Catch::Approx(1.5).epsilon(1e-12));
    // both endpoints singular: int_0^1 x^{-1/2} (1-x)^{-1/2} dx = pi
    CHECK(tanh_sinh([](double, double dlo, double dhi) { return 1.0 / std::sqrt(dlo * dhi); },
                    0.0, 1.0) == Catch::Approx(3.14159265358979324).epsilon(1e-12));
}

TEST_CASE("smooth integrand") {
    CHECK(tanh_sinh([](double x, double, double) { return std::sin(x); }, 0.0,
                    3.14159265358979324) == Catch::Approx(2.0).epsilon(1e-12));
    CHECK(tanh_sinh([](double x, double, double) { return x * x; }, -1.0, 2.0) ==
          Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("value frozen from the midpoint oracle") {
    // integral_{3/4}^{1} dxi/(sqrt(1-xi) sqrt(xi)); 1e7-panel midpoint run
    // gave 1.0471975511965976 (the closed form is pi/3)
    const double frozen = 1.0471975511965976;
    const double de = tanh_sinh(
        [](double x, double, double dhi) { return 1.0 / (std::sqrt(dhi) * std::sqrt(x)); }, 0.75,
        1.0);
    CHECK(de == Catch::Approx(frozen).epsilon(1e-12));
    CHECK(midpoint_after_substitution(1'000'000) == Catch::Approx(de).margin(5e-12));
}

TEST_CASE("oriented integration flips sign") {
    auto f = [](double x, double, double) { return x; };
    const double fwd = tanh_sinh_oriented(f, 0.0, 1.0);
    const double rev = tanh_sinh_oriented(f, 1.0, 0.0);
    CHECK(fwd == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(rev == Catch::Approx(-0.5).epsilon(1e-12));
    CHECK(tanh_sinh_oriented(f, 0.3, 0.3) == 0.0);
}

TEST_CASE("configuration validation") {
    QuadratureConfig bad;
    bad.abs_tol = 0.0;
    CHECK_THROWS_AS(tanh_sinh([](double, double, double) { return 1.0; }, 0.0, 1.0, bad),
                    std::invalid_argument);
    bad = QuadratureConfig{};
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(tanh_sinh([](double, double, double) { return 1.0; }, 0.0, 1.0, bad),
                    std::invalid_argument);
    bad = QuadratureConfig{};
    bad.max_levels = 2;
    CHECK_THROWS_AS(tanh_sinh([](double, double, double) { return 1.0; }, 0.0, 1.0, bad),
                    std::invalid_argument);
    CHECK_THROWS_AS(tanh_sinh([](double, double, double) { return 1.0; }, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("refinement failure carries the last two estimates") {
    QuadratureConfig strict;
    strict.abs_tol = 1e-300;
    strict.rel_tol = 1e-16;
    strict.max_levels = 3;
    try {
        tanh_sinh([](double, double dlo, double) { return 1.0 / std::sqrt(dlo); }, 0.0, 1.0,
                  strict);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(e.previous_estimate() == Catch::Approx(2.0).epsilon(1e-3));
        CHECK(e.last_estimate() == Catch::Approx(2.0).epsilon(1e-5));
        CHECK(e.previous_estimate() != e.last_estimate());
    }
}

TEST_CASE("non-finite integrand sample is reported") {
    CHECK_THROWS_AS(tanh_sinh([](double, double, double) {
                        return std::numeric_limits<double>::quiet_NaN();
                    },
                    0.0, 1.0),
                    quadrature_error);
}

TEST_CASE("zero-width interval") {
    CHECK(tanh_sinh([](double, double, double) { return 42.0; }, 1.5, 1.5) == 0.0);
}
