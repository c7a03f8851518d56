#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <robinext/bessel.hpp>

#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Reference values frozen from the integral representation evaluated in
// 40-digit arithmetic.
constexpr double kK0_1 = 0.42102443824070833334;
constexpr double kK1_1 = 0.60190723019723457474;
constexpr double kK2_1 = 1.6248388986351774828;
constexpr double kK0_2 = 0.11389387274953343565;
constexpr double kK1_2 = 0.13986588181652242728;
constexpr double kK0s_5 = 0.54780756431351898687;  // e^5 K0(5)

std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> xs(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i)
    xs[i] = std::exp(a + (b - a) * i / (n - 1.0));
  return xs;
}

}  // namespace

TEST_CASE("reference oracle reproduces frozen high-precision values") {
  REQUIRE_THAT(oracles::bessel_kn(0, 1.0), WithinRel(kK0_1, 5e-13));
  REQUIRE_THAT(oracles::bessel_kn(1, 1.0), WithinRel(kK1_1, 5e-13));
  REQUIRE_THAT(oracles::bessel_kn(2, 1.0), WithinRel(kK2_1, 5e-13));
  REQUIRE_THAT(oracles::bessel_kn(0, 2.0), WithinRel(kK0_2, 5e-13));
  REQUIRE_THAT(oracles::bessel_kn_scaled(0, 5.0), WithinRel(kK0s_5, 5e-13));
}

TEST_CASE("K0 and K1 match frozen references at spot points") {
  REQUIRE_THAT(robinext::k0(1.0), WithinRel(kK0_1, 1e-13));
  REQUIRE_THAT(robinext::k1(1.0), WithinRel(kK1_1, 1e-13));
  REQUIRE_THAT(robinext::k0(2.0), WithinRel(kK0_2, 1e-13));
  REQUIRE_THAT(robinext::k1(2.0), WithinRel(kK1_2, 1e-13));
  REQUIRE_THAT(robinext::k0_scaled(5.0), WithinRel(kK0s_5, 1e-13));
}

TEST_CASE("scaled K0 and K1 match the integral representation across six decades") {
  for (double x : log_spaced(1e-6, 700.0, 90)) {
    CAPTURE(x);
    REQUIRE_THAT(robinext::k0_scaled(x),
                 WithinRel(oracles::bessel_kn_scaled(0, x), 1e-12));
    REQUIRE_THAT(robinext::k1_scaled(x),
                 WithinRel(oracles::bessel_kn_scaled(1, x), 1e-12));
  }
  // Points straddling the internal branch switches.
  for (double x : {1.999999999, 2.000000001, 7.999999999, 8.000000001}) {
    CAPTURE(x);
    REQUIRE_THAT(robinext::k0_scaled(x),
                 WithinRel(oracles::bessel_kn_scaled(0, x), 1e-12));
    REQUIRE_THAT(robinext::k1_scaled(x),
                 WithinRel(oracles::bessel_kn_scaled(1, x), 1e-12));
  }
}

TEST_CASE("derivative identities hold") {
  SECTION("K0' = -K1 exactly by construction") {
    for (double x : {0.3, 1.0, 4.0, 50.0})
      REQUIRE(robinext::k0_prime(x) == -robinext::k1(x));
  }
  SECTION("K1' residual stays at rounding level over 1000 log-spaced points") {
    for (double x : log_spaced(1e-4, 600.0, 1000)) {
      CAPTURE(x);
      const double kp = robinext::k1_prime(x);
      const double res = kp + robinext::k0(x) + robinext::k1(x) / x;
      REQUIRE(std::abs(res) <= 1e-12 * std::abs(kp));
    }
  }
  SECTION("central differences confirm both derivatives") {
    const double h = 1e-5;
    const double fd0 = (robinext::k0(2.0 + h) - robinext::k0(2.0 - h)) / (2.0 * h);
    REQUIRE_THAT(fd0, WithinAbs(robinext::k0_prime(2.0), 1e-6));
    const double fd1 = (robinext::k1(2.0 + h) - robinext::k1(2.0 - h)) / (2.0 * h);
    REQUIRE_THAT(fd1, WithinAbs(robinext::k1_prime(2.0), 1e-6));
    REQUIRE(robinext::k1_prime(1.0) < 0.0);
    REQUIRE_THAT(robinext::k1_prime(1.0), WithinRel(-(kK0_1 + kK1_1), 1e-13));
  }
}

TEST_CASE("K0/K1 ratio obeys its two-sided bounds and limits") {
  auto lower = [](double x) { return 2.0 * x / (1.0 + std::sqrt(1.0 + 4.0 * x * x)); };
  for (double x : {0.01, 0.1, 1.0, 10.0, 500.0}) {
    CAPTURE(x);
    const double r = robinext::k_ratio(x);
    REQUIRE(r >= lower(x));
    REQUIRE(r < 1.0);
  }
  double prev = 0.0;
  for (double x : log_spaced(1e-4, 700.0, 200)) {
    CAPTURE(x);
    const double r = robinext::k_ratio(x);
    REQUIRE(r >= lower(x));
    REQUIRE(r < 1.0);
    REQUIRE(r > prev);  // strictly increasing
    prev = r;
  }
  REQUIRE(robinext::k_ratio(500.0) > 0.999);
  REQUIRE(robinext::k_ratio(1e-4) < 0.01);
}

TEST_CASE("upward recurrence produces higher orders") {
  SECTION("base cases delegate") {
    REQUIRE(robinext::kn(0, 1.7) == robinext::k0(1.7));
    REQUIRE(robinext::kn(1, 1.7) == robinext::k1(1.7));
  }
  SECTION("K2(1) matches the frozen reference") {
    REQUIRE_THAT(robinext::kn(2, 1.0), WithinRel(kK2_1, 1e-13));
  }
  SECTION("orders 2..8 match the integral representation") {
    for (int n = 2; n <= 8; ++n)
      for (double x : {0.5, 2.0, 10.0}) {
        CAPTURE(n, x);
        REQUIRE_THAT(robinext::kn_scaled(n, x),
                     WithinRel(oracles::bessel_kn_scaled(n, x), 1e-11));
      }
  }
  SECTION("strictly increasing in order at fixed argument") {
    for (double x : {0.5, 2.0}) {
      for (int n = 0; n < 8; ++n) {
        CAPTURE(n, x);
        REQUIRE(robinext::kn(n + 1, x) > robinext::kn(n, x));
      }
    }
  }
}

TEST_CASE("scaling identities and tail underflow policy") {
  REQUIRE_THAT(robinext::k0_scaled(5.0) * std::exp(-5.0) / robinext::k0(5.0),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(robinext::k1_scaled(2.0) * std::exp(-2.0),
               WithinRel(robinext::k1(2.0), 1e-12));

  // Far tail: unscaled flushes to zero, scaled stays finite and positive.
  REQUIRE(robinext::k0(800.0) == 0.0);
  REQUIRE(robinext::k1(800.0) == 0.0);
  REQUIRE(robinext::k0_scaled(800.0) > 0.0);
  REQUIRE(std::isfinite(robinext::k1_scaled(800.0)));

  const robinext::BesselEval far = robinext::eval_kn(0, 800.0);
  REQUIRE(far.value == 0.0);
  REQUIRE(far.scaled_value > 0.0);

  const robinext::BesselEval near = robinext::eval_kn(1, 3.0);
  REQUIRE_THAT(near.value, WithinRel(near.scaled_value * std::exp(-3.0), 1e-12));
  REQUIRE(near.x == 3.0);
}

TEST_CASE("positivity and the K1 > K0 ordering") {
  for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    CAPTURE(x);
    REQUIRE(robinext::k0(x) > 0.0);
    REQUIRE(robinext::k1(x) > robinext::k0(x));
  }
}

TEST_CASE("nonpositive arguments and negative orders are rejected") {
  REQUIRE_THROWS_AS(robinext::k0(0.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::k0(-1.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::k1(0.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::k1_prime(-2.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::k_ratio(0.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::kn(-1, 1.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::kn(2, 0.0), std::domain_error);
  REQUIRE_THROWS_AS(robinext::k0(std::numeric_limits<double>::quiet_NaN()),
                    std::domain_error);
}
