#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "superlab/estimators.hpp"
#include "superlab/normal.hpp"

using namespace superlab;

TEST_CASE("estimate: MLE and Constant") {
  CHECK(estimate(EstimatorSpec::mle(), 100, 0.37) == doctest::Approx(0.37));
  CHECK(estimate(EstimatorSpec::constant(2.5), 100, 0.37) ==
        doctest::Approx(2.5));
}

TEST_CASE("estimate: Hodges band is strict") {
  const auto hodges = EstimatorSpec::hodges(0.0);
  // n = 10^4: n^{-1/4} = 0.1 exactly.
  CHECK(estimate(hodges, 10000, 0.0999) == doctest::Approx(0.0));
  CHECK(estimate(hodges, 10000, 0.1) == doctest::Approx(0.1));
  CHECK(estimate(hodges, 10000, -0.0999) == doctest::Approx(0.0));
  CHECK(estimate(hodges, 10000, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("estimate: two-pivot variant, first pivot wins on overlap") {
  const auto two = EstimatorSpec::two_pivot_hodges(0.0, 0.04);
  CHECK(estimate(two, 10000, 0.02) == doctest::Approx(0.0));
  CHECK(estimate(two, 10000, 0.11) == doctest::Approx(0.04));
  CHECK(estimate(two, 10000, 0.5) == doctest::Approx(0.5));
}

TEST_CASE("concentration_exact: MLE closed form") {
  GaussianLocationModel model(1.0);
  // radius = c n^{-1/2} makes the probability 2 Phi(-c/sigma), any n.
  for (long n : {4L, 100L, 10000L}) {
    const double r1 = 1.0 / std::sqrt(static_cast<double>(n));
    CHECK(concentration_exact(model, EstimatorSpec::mle(), 0.2, n, r1, 0.2)
              .probability ==
          doctest::Approx(0.3173105078629141).epsilon(1e-14));
    CHECK(concentration_exact(model, EstimatorSpec::mle(), 0.2, n, 2.0 * r1, 0.2)
              .probability ==
          doctest::Approx(0.04550026389635841).epsilon(1e-14));
  }
}

TEST_CASE("concentration_exact: Constant estimator is 0/1") {
  GaussianLocationModel model(1.0);
  const auto c0 = EstimatorSpec::constant(0.0);
  CHECK(concentration_exact(model, c0, 0.0, 100, 0.1, 0.0).probability ==
        doctest::Approx(0.0));
  CHECK(concentration_exact(model, c0, 1.0, 100, 0.1, 1.0).probability ==
        doctest::Approx(1.0));
  // Boundary |value - center| == radius is not an exceedance (strict event).
  CHECK(concentration_exact(model, c0, 0.5, 100, 0.5, 0.5).probability ==
        doctest::Approx(0.0));
}

TEST_CASE("concentration_exact: Hodges equals the MLE far from the pivot") {
  GaussianLocationModel model(1.0);
  const auto hodges = EstimatorSpec::hodges(0.0);
  const auto mle = EstimatorSpec::mle();
  const double r = 0.05;
  const double ph = concentration_exact(model, hodges, 5.0, 100, r, 5.0).probability;
  const double pm = concentration_exact(model, mle, 5.0, 100, r, 5.0).probability;
  // The pivot band and the acceptance interval are disjoint, so the two
  // exceedance events coincide.
  CHECK(std::fabs(ph - pm) <= 1e-15);
}

TEST_CASE("concentration_exact: Hodges at its pivot collapses the tail") {
  GaussianLocationModel model(1.0);
  const auto hodges = EstimatorSpec::hodges(0.0);
  const long n = 1000000;
  const double radius = 1.0 / std::sqrt(static_cast<double>(n));
  // Exceedance reduces to |mean| >= n^{-1/4}: log p = ln 2 + ln Phi(-n^{1/4}).
  const double expected = std::log(2.0) + log_normal_cdf(-std::pow(10.0, 1.5));
  CHECK(concentration_exact_log(model, hodges, 0.0, n, radius, 0.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(std::log(2.0) - 504.37381368494163)
                        .epsilon(1e-12));
}

TEST_CASE("concentration_exact_log agrees with the linear computation") {
  GaussianLocationModel model(1.0);
  for (const auto& spec : {EstimatorSpec::mle(), EstimatorSpec::hodges(0.0)}) {
    const double p =
        concentration_exact(model, spec, 0.1, 64, 0.2, 0.1).probability;
    const double lp = concentration_exact_log(model, spec, 0.1, 64, 0.2, 0.1);
    CHECK(lp == doctest::Approx(std::log(p)).epsilon(1e-12));
  }
}

TEST_CASE("concentration_exact_log sums finite intervals in deep tails") {
  GaussianLocationModel model(1.0);
  // Away from the pivot with radius > band, the Hodges exceedance event is
  // the same two-sided tail as the MLE's, but it is assembled from finite
  // mean intervals; their log masses must recombine to ln(2 Phi(-10)).
  const long n = 1000;
  const double radius = 10.0 / std::sqrt(static_cast<double>(n));
  const double lh = concentration_exact_log(model, EstimatorSpec::hodges(0.0),
                                            1.0, n, radius, 1.0);
  CHECK(lh == doctest::Approx(std::log(2.0) + log_normal_cdf(-10.0))
                  .epsilon(1e-10));
}

TEST_CASE("concentration_mc: deterministic and chunk-order independent") {
  GaussianLocationModel model(1.0);
  const auto spec = EstimatorSpec::hodges(0.0);
  // 150000 samples crosses the parallel-chunking threshold; a prefix of the
  // same counter stream must agree with the serial small run draw by draw.
  const auto big =
      concentration_mc(model, spec, 0.3, 100, 0.1, 0.3, 150000, 99);
  const auto again =
      concentration_mc(model, spec, 0.3, 100, 0.1, 0.3, 150000, 99);
  CHECK(big.probability == again.probability);
  CHECK(big.std_error == again.std_error);
  CHECK(big.std_error > 0.0);
  CHECK_THROWS_AS(concentration_mc(model, spec, 0.3, 100, 0.1, 0.3, 10, 99),
                  std::domain_error);
}

TEST_CASE("concentration_mc tracks the exact probability") {
  GaussianLocationModel model(1.0);
  for (const auto& spec : {EstimatorSpec::mle(), EstimatorSpec::hodges(0.0),
                           EstimatorSpec::constant(0.0)}) {
    const double exact =
        concentration_exact(model, spec, 0.3, 100, 0.15, 0.3).probability;
    const auto mc =
        concentration_mc(model, spec, 0.3, 100, 0.15, 0.3, 200000, 5);
    CHECK(std::fabs(mc.probability - exact) <= 4.0 * mc.std_error + 1e-6);
  }
}

TEST_CASE("concentration_mc full-sample mode matches the reduced draw") {
  GaussianLocationModel model(2.0);
  const auto spec = EstimatorSpec::mle();
  const double exact =
      concentration_exact(model, spec, -0.2, 25, 0.5, -0.2).probability;
  const auto mc =
      concentration_mc(model, spec, -0.2, 25, 0.5, -0.2, 50000, 17, true);
  CHECK(std::fabs(mc.probability - exact) <= 4.0 * mc.std_error + 1e-6);
}

TEST_CASE("mle_bound_check: n-independence within 1e-12") {
  GaussianLocationModel model(1.0);
  const auto report =
      mle_bound_check(model, 1.5, {10, 100, 10000, 1000000}, 0.0);
  CHECK(report.pass);
  CHECK(report.max_abs_deviation <= 1e-12);
  CHECK(report.expected == doctest::Approx(2.0 * normal_cdf(-1.5)).epsilon(1e-15));
  CHECK(report.lower_bound == doctest::Approx(normal_cdf(-1.5)).epsilon(1e-15));
}

TEST_CASE("estimator describe strings") {
  CHECK(EstimatorSpec::mle().describe() == "mle");
  CHECK(EstimatorSpec::hodges(0.5).describe().find("hodges") == 0);
  CHECK(EstimatorSpec::constant(1.0).describe().find("constant") == 0);
}
