#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "superlab/efficiency.hpp"

using namespace superlab;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("ae_estimate: MLE is asymptotically efficient") {
  GaussianLocationModel model(1.0);
  const auto est = ae_estimate(model, EstimatorSpec::mle(), 0.0,
                               {1.0, 2.0, 5.0, 8.0, 10.0}, {100, 1000, 10000});
  // Inner values are n-independent for the MLE; at c = 10 the value is
  // -ln(2 Phi(-10)) / 50.
  CHECK(est.inner_values[4][0] ==
        doctest::Approx(1.0507627593990505).epsilon(1e-12));
  CHECK(est.inner_values[4][0] ==
        doctest::Approx(est.inner_values[4][2]).epsilon(1e-12));
  CHECK(est.ae_approx >= 1.0);
  CHECK(est.ae_approx <= 1.06);
}

TEST_CASE("ae_estimate: Hodges diverges at its pivot") {
  GaussianLocationModel model(1.0);
  const auto est = ae_estimate(model, EstimatorSpec::hodges(0.0), 0.0, {1.0},
                               {100, 10000, 1000000});
  // Frozen reference: (ln 2 - 504.37381368494163) / (-1/2).
  CHECK(est.inner_values[0][2] ==
        doctest::Approx(1007.3613330087634).epsilon(1e-10));
  CHECK(est.inner_values[0][2] > 100.0);
  CHECK(est.ae_approx > 100.0);
}

TEST_CASE("ae_estimate: Hodges away from its pivot behaves like the MLE") {
  GaussianLocationModel model(1.0);
  const auto hodges = ae_estimate(model, EstimatorSpec::hodges(0.0), 3.0,
                                  {1.0, 2.0, 5.0, 8.0, 10.0}, {1000, 10000});
  const auto mle = ae_estimate(model, EstimatorSpec::mle(), 3.0,
                               {1.0, 2.0, 5.0, 8.0, 10.0}, {1000, 10000});
  CHECK(hodges.ae_approx == doctest::Approx(mle.ae_approx).epsilon(1e-9));
}

TEST_CASE("ae_estimate: Constant at its own value is infinite") {
  GaussianLocationModel model(1.0);
  const auto est = ae_estimate(model, EstimatorSpec::constant(0.4), 0.4,
                               {1.0, 2.0}, {100, 1000});
  CHECK(est.ae_approx == kInf);
}

TEST_CASE("ae_estimate rejects bad grids") {
  GaussianLocationModel model(1.0);
  CHECK_THROWS_AS(
      ae_estimate(model, EstimatorSpec::mle(), 0.0, {}, {100}),
      std::domain_error);
  CHECK_THROWS_AS(
      ae_estimate(model, EstimatorSpec::mle(), 0.0, {2.0, 1.0}, {100}),
      std::domain_error);
  CHECK_THROWS_AS(
      ae_estimate(model, EstimatorSpec::mle(), 0.0, {1.0}, {100, 100}),
      std::domain_error);
}

TEST_CASE("corollary3_demo reproduces the 1-or-infinity dichotomy") {
  GaussianLocationModel model(1.0);
  const auto report = corollary3_demo(model, {0.0, 1.0},
                                      {1.0, 2.0, 5.0, 8.0, 10.0},
                                      {1000, 100000, 10000000});
  REQUIRE(report.rows.size() == 6);
  // theta = 0: MLE ~ 1, Constant{0} = inf, Hodges{0} exceeds 1 at its pivot.
  CHECK(report.rows[0].ae_approx >= 1.0);
  CHECK(report.rows[0].ae_approx <= 1.06);
  CHECK(report.rows[1].ae_approx == kInf);
  CHECK(report.rows[2].ae_approx > 2.0);
  // theta = 1: the Hodges pivot 0 is elsewhere, so it behaves like the MLE.
  CHECK(report.rows[5].ae_approx >= 1.0);
  CHECK(report.rows[5].ae_approx <= 1.06);
}
