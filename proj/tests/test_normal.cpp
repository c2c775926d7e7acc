#include <cmath>
#include <initializer_list>
#include <limits>

#include "doctest.h"
#include "superlab/normal.hpp"

using superlab::log_normal_cdf;
using superlab::normal_cdf;

// Reference values frozen from a 40-digit multiprecision evaluation.
TEST_CASE("normal_cdf matches reference values") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(normal_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  CHECK(normal_cdf(-2.0) ==
        doctest::Approx(0.022750131948179207).epsilon(1e-14));
  CHECK(normal_cdf(-10.0) ==
        doctest::Approx(7.619853024160526e-24).epsilon(1e-13));
  CHECK(normal_cdf(1.0) == doctest::Approx(1.0 - 0.15865525393145705).epsilon(1e-15));
}

TEST_CASE("normal_cdf symmetry and monotonicity") {
  for (double x : {0.1, 0.7, 1.3, 2.9, 5.0}) {
    CHECK(normal_cdf(x) + normal_cdf(-x) == doctest::Approx(1.0).epsilon(1e-15));
  }
  double prev = 0.0;
  for (double x = -40.0; x <= 40.0; x += 0.5) {
    const double v = normal_cdf(x);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("normal_cdf stays strictly positive deep in the lower tail") {
  CHECK(normal_cdf(-38.0) > 0.0);
  CHECK(normal_cdf(-40.0) > 0.0);
}

TEST_CASE("log_normal_cdf agrees with log(normal_cdf) where both are safe") {
  for (double x : {-5.0, -2.0, -0.5, 0.0, 1.0, 3.0}) {
    CHECK(log_normal_cdf(x) ==
          doctest::Approx(std::log(normal_cdf(x))).epsilon(1e-13));
  }
}

TEST_CASE("log_normal_cdf deep-tail reference values") {
  CHECK(log_normal_cdf(-8.0) ==
        doctest::Approx(-35.013437159914550).epsilon(1e-13));
  CHECK(log_normal_cdf(-37.0) ==
        doctest::Approx(-689.03058557689059).epsilon(1e-13));
  CHECK(log_normal_cdf(-40.0) ==
        doctest::Approx(-804.60844201375379).epsilon(1e-13));
  CHECK(std::isfinite(log_normal_cdf(-200.0)));
  CHECK(log_normal_cdf(std::numeric_limits<double>::infinity()) == 0.0);
}
