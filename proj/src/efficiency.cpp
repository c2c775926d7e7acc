#include "superlab/efficiency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace superlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_ascending_positive(const std::vector<double>& grid) {
  if (grid.empty()) throw std::domain_error("empty grid");
  double prev = 0.0;
  for (double v : grid) {
    if (!(v > prev)) throw std::domain_error("grid must be ascending and positive");
    prev = v;
  }
}

void require_ascending_positive(const std::vector<long>& grid) {
  if (grid.empty()) throw std::domain_error("empty grid");
  long prev = 0;
  for (long v : grid) {
    if (v <= prev) throw std::domain_error("grid must be ascending and positive");
    prev = v;
  }
}

// Minimum over the largest half (upper ceil(size/2) entries).
double tail_min(const std::vector<double>& values) {
  const std::size_t start = values.size() / 2;
  double m = kInf;
  for (std::size_t i = start; i < values.size(); ++i) m = std::min(m, values[i]);
  return m;
}

}  // namespace

EfficiencyEstimate ae_estimate(const GaussianLocationModel& model,
                               const EstimatorSpec& spec, double theta,
                               const std::vector<double>& c_grid,
                               const std::vector<long>& n_grid) {
  require_ascending_positive(c_grid);
  require_ascending_positive(n_grid);
  model.require_in_domain(theta);
  const double info = model.fisher_information();

  EfficiencyEstimate est;
  est.theta = theta;
  est.c_grid = c_grid;
  est.n_grid = n_grid;
  est.inner_values.resize(c_grid.size());

  for (std::size_t ci = 0; ci < c_grid.size(); ++ci) {
    const double c = c_grid[ci];
    const double denom = c * c * info / 2.0;
    est.inner_values[ci].reserve(n_grid.size());
    for (long n : n_grid) {
      const double radius = c / std::sqrt(static_cast<double>(n));
      const double log_p =
          concentration_exact_log(model, spec, theta, n, radius, theta);
      est.inner_values[ci].push_back(log_p == -kInf ? kInf : -log_p / denom);
    }
  }

  std::vector<double> per_c;
  per_c.reserve(c_grid.size());
  for (const auto& row : est.inner_values) per_c.push_back(tail_min(row));
  est.ae_approx = tail_min(per_c);
  return est;
}

Corollary3Report corollary3_demo(const GaussianLocationModel& model,
                                 const std::vector<double>& theta_list,
                                 const std::vector<double>& c_grid,
                                 const std::vector<long>& n_grid) {
  if (theta_list.empty()) throw std::domain_error("empty theta list");
  Corollary3Report report;
  const double hodges_pivot = theta_list.front();
  for (double theta : theta_list) {
    const EstimatorSpec specs[] = {EstimatorSpec::mle(),
                                   EstimatorSpec::constant(theta),
                                   EstimatorSpec::hodges(hodges_pivot)};
    for (const auto& spec : specs) {
      auto est = ae_estimate(model, spec, theta, c_grid, n_grid);
      report.rows.push_back({theta, spec.describe(), est.ae_approx});
      report.estimates.push_back(std::move(est));
    }
  }
  return report;
}

}  // namespace superlab
