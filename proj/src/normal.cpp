#include "superlab/normal.hpp"

#include <cmath>
#include <limits>

namespace superlab {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kHalfLog2Pi = 0.91893853320467274178;
}  // namespace

double normal_cdf(double x) {
  double v = 0.5 * std::erfc(-x * kInvSqrt2);
  if (v <= 0.0 && std::isfinite(x)) {
    return std::numeric_limits<double>::denorm_min();
  }
  return v;
}

double log_normal_cdf(double x) {
  if (x >= -1.0) {
    // Phi(x) is at least 0.158; complement form keeps precision near 1.
    return std::log1p(-0.5 * std::erfc(x * kInvSqrt2));
  }
  if (x > -36.5) {
    // erfc stays normalised down to roughly erfc(26) ~ 1e-296.
    return std::log(0.5 * std::erfc(-x * kInvSqrt2));
  }
  // Mills-ratio asymptotic series: Phi(x) = phi(x)/(-x) * sum, x << 0,
  // sum = 1 - 1/x^2 + 3/x^4 - 15/x^6 + ...  (alternating, truncate at the
  // smallest term; for |x| >= 36.5 the tail is below 1e-17).
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= -static_cast<double>(2 * k - 1) / x2;
    if (std::fabs(term) < 1e-18) break;
    sum += term;
  }
  return -0.5 * x2 - std::log(-x) - kHalfLog2Pi + std::log(sum);
}

}  // namespace superlab
