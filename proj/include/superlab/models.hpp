#ifndef SUPERLAB_MODELS_HPP
#define SUPERLAB_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace superlab {

// N(theta, sigma^2)^n with known sigma; parameter space is an open interval.
// Fisher information is constant: I(theta) = 1/sigma^2.
class GaussianLocationModel {
 public:
  GaussianLocationModel(double sigma, double theta_lo, double theta_hi);
  explicit GaussianLocationModel(double sigma);

  double sigma() const { return sigma_; }
  double theta_lo() const { return theta_lo_; }
  double theta_hi() const { return theta_hi_; }
  double fisher_information() const { return 1.0 / (sigma_ * sigma_); }
  bool contains(double theta) const {
    return theta > theta_lo_ && theta < theta_hi_;
  }
  // Throws std::domain_error when theta is outside the parameter space.
  void require_in_domain(double theta) const;

 private:
  double sigma_;
  double theta_lo_;
  double theta_hi_;
};

// Two probability vectors on the same finite sample space; the oracle
// substrate for affinity and variation-distance computations.
class DiscreteModelPair {
 public:
  DiscreteModelPair(std::vector<double> p, std::vector<double> q);

  const std::vector<double>& p() const { return p_; }
  const std::vector<double>& q() const { return q_; }
  std::size_t size() const { return p_.size(); }

 private:
  std::vector<double> p_;
  std::vector<double> q_;
};

struct AffinityResult {
  double value = 0.0;
  std::vector<int> witness_set;  // indices of the minimising event E
};

// pi(P_{n,theta1}, P_{n,theta2}) = Phi(-|theta2-theta1| sqrt(n) / (2 sigma)).
double affinity_exact_gaussian(const GaussianLocationModel& model,
                               double theta1, double theta2, long n);

// ||P_{n,theta1} - P_{n,theta2}|| = 1 - 2 Phi(-|theta2-theta1| sqrt(n)/(2 sigma)).
double variation_distance_exact_gaussian(const GaussianLocationModel& model,
                                         double theta1, double theta2, long n);

// Exhaustive minimisation of max(P(E), Q(E^c)) over all 2^k subsets.
// Guarded at k <= 20.
AffinityResult affinity_bruteforce_discrete(const DiscreteModelPair& pair);

// Same infimum computed by walking the outcomes in likelihood-ratio order
// while keeping the Pareto frontier of (P(E), Q(E)) partial sums. Exact;
// fast when the frontier stays small, which the ratio order encourages.
double affinity_neyman_pearson_discrete(const DiscreteModelPair& pair);

// sup_E |P(E) - Q(E)| = sum_i max(p_i - q_i, 0).
double variation_distance_discrete(const DiscreteModelPair& pair);

// pi(P, Q) >= (1 - ||P - Q||) / 2.
double affinity_lower_bound_from_tv(double tv);

struct GridEntry {
  double theta1 = 0.0;
  double theta2 = 0.0;
  long n = 1;
};

struct SlackRow {
  GridEntry entry;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // signed; pass iff slack >= -1e-12
  bool pass = false;
  bool rejected = false;  // entry violated a precondition (e.g. theta1 == theta2)
  std::string note;
};

struct SlackReport {
  std::vector<SlackRow> rows;
  bool all_pass = true;
};

// Affinity vs Phi(-|d| sqrt(n I(theta))/2) - eps.
SlackReport check_assumption_1(const GaussianLocationModel& model, double theta,
                               const std::vector<GridEntry>& grid,
                               double epsilon);

// One-sided likelihood-ratio exceedance vs the same right-hand side;
// entries with theta1 == theta2 are rejected.
SlackReport check_assumption_2(const GaussianLocationModel& model, double theta,
                               const std::vector<GridEntry>& grid,
                               double epsilon);

// Variation distance vs 1 - 2 Phi(-|d| sqrt(n I(theta))/2) + eps.
SlackReport check_assumption_4(const GaussianLocationModel& model, double theta,
                               const std::vector<GridEntry>& grid,
                               double epsilon);

struct LanReport {
  double theta = 0.0;
  double lambda = 0.0;
  long n = 0;
  long samples = 0;
  std::uint64_t seed = 0;
  double max_abs_residual = 0.0;  // max |psi| over the draws
  double ks_distance = 0.0;       // empirical Delta sample vs N(0,1)
  double ks_critical_01 = 0.0;    // asymptotic 1% critical value
  bool ks_pass = false;
};

// Verifies the log-likelihood-ratio decomposition
//   ln(f_{n,theta+lambda*sigma/sqrt(n)} / f_{n,theta}) = lambda*Delta - lambda^2/2
// on Monte Carlo draws of the sufficient statistic, and KS-tests Delta.
LanReport check_lan_decomposition(const GaussianLocationModel& model,
                                  double theta, double lambda, long n,
                                  long samples, std::uint64_t seed);

// Kolmogorov-Smirnov distance of a sample to N(0,1) (sorts a copy).
double ks_distance_to_normal(std::vector<double> sample);

}  // namespace superlab

#endif
