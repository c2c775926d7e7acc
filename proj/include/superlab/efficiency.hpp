#ifndef SUPERLAB_EFFICIENCY_HPP
#define SUPERLAB_EFFICIENCY_HPP

#include <string>
#include <vector>

#include "superlab/estimators.hpp"
#include "superlab/models.hpp"

namespace superlab {

// Finite-scale surrogate of the asymptotic-efficiency functional
//   ae_theta(T) = liminf_c liminf_n  -ln P_{n,theta}(|T_n-theta| > c n^{-1/2})
//                                    / (c^2 I(theta) / 2),
// with -ln 0 := +inf. The double liminf is approximated by taking, for each
// c, the minimum over the largest half of n_grid, then the minimum over the
// largest half of c_grid. The raw matrix is kept so the reduction is
// auditable.
struct EfficiencyEstimate {
  double theta = 0.0;
  std::vector<double> c_grid;
  std::vector<long> n_grid;
  std::vector<std::vector<double>> inner_values;  // [c index][n index], may be +inf
  double ae_approx = 0.0;                         // may be +inf
};

EfficiencyEstimate ae_estimate(const GaussianLocationModel& model,
                               const EstimatorSpec& spec, double theta,
                               const std::vector<double>& c_grid,
                               const std::vector<long>& n_grid);

struct Corollary3Row {
  double theta = 0.0;
  std::string estimator;
  double ae_approx = 0.0;  // may be +inf
};

// For each theta: the MLE (expected ~1), Constant{theta} (expected +inf),
// and Hodges pivoted at the first theta (divergent at the pivot, ~1 away
// from it).
struct Corollary3Report {
  std::vector<Corollary3Row> rows;
  std::vector<EfficiencyEstimate> estimates;  // parallel to rows
};

Corollary3Report corollary3_demo(const GaussianLocationModel& model,
                                 const std::vector<double>& theta_list,
                                 const std::vector<double>& c_grid,
                                 const std::vector<long>& n_grid);

}  // namespace superlab

#endif
