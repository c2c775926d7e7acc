#ifndef SUPERLAB_EXTRACTION_HPP
#define SUPERLAB_EXTRACTION_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "superlab/estimators.hpp"
#include "superlab/models.hpp"

namespace superlab {

// Interval endpoints and grid points are exact rationals; probabilities and
// Phi values are floating point and only feed threshold comparisons (with a
// 1e-12 margin).
using Rational = mpq_class;

// Parses "p/q" or a decimal string ("0.05", "-1.25e-2") exactly.
Rational rational_from_string(const std::string& s);
std::string rational_to_string(const Rational& r);

// Signals that the current interval is too wide for any admissible n
// (no integer in the range prescribed by the width): the caller must start
// from a shorter initial interval.
class WidthError : public std::runtime_error {
 public:
  explicit WidthError(const std::string& what) : std::runtime_error(what) {}
};

// A certified bound failed: the model/estimator pair breaks the premises the
// shrinking step relies on.
class AssumptionViolation : public std::runtime_error {
 public:
  explicit AssumptionViolation(const std::string& what)
      : std::runtime_error(what) {}
};

struct ExtractionConfig {
  Rational c = 1;            // > 0
  Rational a = Rational(1, 2);  // in (0,1)
  Rational i_bar = 1;        // > sup I(q) over (L, R)
  Rational epsilon = Rational(1, 10);  // > 0
  long n_min = 1;            // 1 for the exact Gaussian model
  Rational L = 0;
  Rational R = 0;            // initial open interval (L, R) inside Theta
  long grid_points = 64;     // suitability-scan resolution per iteration
  double tolerance = 1e-3;   // target interval width
  long max_iterations = 100;

  // a * Phi(-c sqrt(i_bar)): the suitability threshold, fixed per config.
  double threshold() const;
  // Phi(-(1+eps)^3 c sqrt(i_bar)) - eps > a Phi(-c sqrt(i_bar)).
  // Sufficient premise for the exclusion lemma; reported, not enforced,
  // since the certified per-iteration bounds are what the algorithm relies
  // on for the exact Gaussian model.
  bool lemma1_premise_holds() const;
  // Hard invariants: shape of (L, R), positivity, the width admissibility
  // conditions, I(q) < i_bar on (L, R). Throws std::invalid_argument.
  void validate(const GaussianLocationModel& model) const;
};

// Largest epsilon in {2^-k, k >= 1} satisfying the exclusion-lemma premise
// for the given (c, a, i_bar); throws if none exists down to 2^-40.
Rational suggest_epsilon(const Rational& c, const Rational& a,
                         const Rational& i_bar);

struct ScanPoint {
  Rational q;
  double probability = 0.0;
  bool suitable = false;
};

struct SuitabilityScan {
  long n = 0;
  double threshold = 0.0;
  std::vector<ScanPoint> points;
  std::optional<std::pair<Rational, Rational>> suitable_hull;
  Rational diameter = 0;  // 0 when the hull is absent
};

// P_{n,q}(|T_n - q| > c n^{-1/2}) vs the threshold (1e-12 comparison margin).
std::pair<double, bool> is_suitable(const GaussianLocationModel& model,
                                    const EstimatorSpec& spec,
                                    const Rational& q, long n,
                                    const ExtractionConfig& config);

// Smallest integer n with 4(1+eps)^4 c^2 / w^2 <= n <= 4(1+eps)^6 c^2 / w^2
// and n >= n_min, verified exactly in rational arithmetic. Throws WidthError
// when the range contains no admissible integer.
long choose_n(const Rational& theta1, const Rational& theta2,
              const ExtractionConfig& config);

// Evaluates suitability on grid_points equally spaced rationals strictly
// inside (theta1, theta2). Requires grid step <= (c n^{-1/2})/4, checked
// exactly as 16 n step^2 <= c^2.
SuitabilityScan scan_suitable(const GaussianLocationModel& model,
                              const EstimatorSpec& spec, const Rational& theta1,
                              const Rational& theta2, long n,
                              const ExtractionConfig& config);

// Hull widened by one grid step per side, clipped to the previous interval.
// Returns nullopt when no point is suitable. Throws AssumptionViolation when
// the certified width or diameter bound fails.
std::optional<std::pair<Rational, Rational>> shrink_interval(
    const SuitabilityScan& scan, const Rational& theta1, const Rational& theta2,
    const ExtractionConfig& config);

enum class ExtractionOutcome {
  Converged,
  NoSuperefficientPoint,
  AssumptionViolationDetected,
  WidthErrorDetected,
  MaxIterationsReached,
};

struct ExtractionIteration {
  Rational before_lo, before_hi;
  long n = 0;
  SuitabilityScan scan;
  Rational after_lo, after_hi;
  bool width_certified = false;
  bool diameter_certified = false;
};

struct ExtractionTrace {
  std::vector<ExtractionIteration> iterations;
  ExtractionOutcome outcome = ExtractionOutcome::MaxIterationsReached;
  double theta_hat = 0.0;     // midpoint of the final interval on convergence
  long failed_iteration = 0;  // 1-based, for failure outcomes
  std::string detail;
  bool lemma1_premise_holds = false;
  double threshold = 0.0;
};

// The interval-shrinking extraction loop: choose_n -> scan_suitable ->
// shrink_interval from (L, R) until the width reaches the tolerance. Pure:
// identical inputs yield identical traces.
ExtractionTrace extract_parameter(const GaussianLocationModel& model,
                                  const EstimatorSpec& spec,
                                  const ExtractionConfig& config);

// One line per iteration: width, n, hull, certificate status.
std::string render_trace(const ExtractionTrace& trace);

struct Lemma1Report {
  bool accepted = false;     // preconditions held
  std::string reject_reason;
  double prob1 = 0.0, prob2 = 0.0;  // suitability probabilities at q1, q2
  double separation = 0.0;          // |q2 - q1|
  double exclusion_bound = 0.0;     // 2 c n^{-1/2}
  bool separation_ok = false;       // |q2 - q1| <= 2 c n^{-1/2}
  double affinity = 0.0;            // pi(P_{n,q1}, P_{n,q2}), closed form
  double affinity_lower_bound = 0.0;  // Phi(-(1+eps)^3 c sqrt(i_bar)) - eps
  bool affinity_ok = false;
};

// Checks the exclusion consequence on a pair of suitable points at most
// 2(1+eps)^3 c n^{-1/2} apart.
Lemma1Report lemma1_exclusion_check(const GaussianLocationModel& model,
                                    const EstimatorSpec& spec,
                                    const Rational& q1, const Rational& q2,
                                    long n, const ExtractionConfig& config);

struct CountabilityReport {
  long n_chosen = 0;
  long n_lo = 0, n_hi = 0;  // tested range of n (capped at n_max)
  std::vector<Rational> persistent_points;  // suitable at every tested n
  double diameter = 0.0;
  double diameter_bound = 0.0;  // 2 c n_chosen^{-1/2}
  bool pass = false;            // vacuously true when no point persists
};

// Finite-scale shadow of the countability of superefficiency points: points
// of (L, R) suitable at every admissible n form a set of diameter at most
// 2 c n^{-1/2}. Throws AssumptionViolation on a diameter violation.
CountabilityReport countability_gap_check(const GaussianLocationModel& model,
                                          const EstimatorSpec& spec,
                                          const ExtractionConfig& config,
                                          long n_max);

}  // namespace superlab

#endif
