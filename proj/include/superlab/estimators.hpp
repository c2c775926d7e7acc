#ifndef SUPERLAB_ESTIMATORS_HPP
#define SUPERLAB_ESTIMATORS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "superlab/models.hpp"

namespace superlab {

enum class EstimatorKind { Mle, Hodges, Constant, TwoPivotHodges };

// Tagged estimator choice. TwoPivotHodges is a diagnostic variant used as an
// adversarial control in the countability checks; it overrides the mean at
// either of two pivots (first pivot wins on overlap).
struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Mle;
  double pivot = 0.0;   // Hodges / TwoPivotHodges first pivot
  double pivot2 = 0.0;  // TwoPivotHodges second pivot
  double value = 0.0;   // Constant

  static EstimatorSpec mle() { return {EstimatorKind::Mle, 0, 0, 0}; }
  static EstimatorSpec hodges(double pivot) {
    return {EstimatorKind::Hodges, pivot, 0, 0};
  }
  static EstimatorSpec constant(double value) {
    return {EstimatorKind::Constant, 0, 0, value};
  }
  static EstimatorSpec two_pivot_hodges(double p1, double p2) {
    return {EstimatorKind::TwoPivotHodges, p1, p2, 0};
  }
  std::string describe() const;
};

// Apply the estimator to the sufficient statistic. Hodges returns the pivot
// when |mean - pivot| < n^{-1/4} (strict comparison).
double estimate(const EstimatorSpec& spec, long n, double sample_mean);

struct ConcentrationResult {
  double probability = 0.0;
  enum class Method { Exact, MonteCarlo } method = Method::Exact;
  double std_error = 0.0;  // 0 when exact
  long n = 1;
  double theta = 0.0;
  double radius = 0.0;
};

// P_{n,theta}(|T_n - center| > radius), exact. The event is decomposed into
// disjoint sample-mean intervals of a N(theta, sigma^2/n) variable.
ConcentrationResult concentration_exact(const GaussianLocationModel& model,
                                        const EstimatorSpec& spec, double theta,
                                        long n, double radius, double center);

// ln of the same probability, computed in log space end to end (-inf for
// probability zero). Needed where the probability underflows (c or n large).
double concentration_exact_log(const GaussianLocationModel& model,
                               const EstimatorSpec& spec, double theta, long n,
                               double radius, double center);

// Monte Carlo oracle: `samples` draws of the sufficient statistic, or of full
// n-observation samples when full_sample is set (validation mode only).
// Deterministic given the seed, independent of chunking.
ConcentrationResult concentration_mc(const GaussianLocationModel& model,
                                     const EstimatorSpec& spec, double theta,
                                     long n, double radius, double center,
                                     long samples, std::uint64_t seed,
                                     bool full_sample = false);

struct MleBoundRow {
  long n = 0;
  double probability = 0.0;
  double deviation = 0.0;  // probability - expected
};

// For the Gaussian MLE with radius c*n^{-1/2}, the two-tail probability is
// 2 Phi(-c/sigma) for every n; the report asserts this within 1e-12.
struct MleBoundReport {
  double c = 0.0;
  double theta = 0.0;
  double expected = 0.0;  // 2 Phi(-c sqrt(I(theta)))
  double lower_bound = 0.0;  // Phi(-c sqrt(I(theta)))
  std::vector<MleBoundRow> rows;
  double max_abs_deviation = 0.0;
  bool pass = false;
};

MleBoundReport mle_bound_check(const GaussianLocationModel& model, double c,
                               const std::vector<long>& n_list, double theta);

}  // namespace superlab

#endif
