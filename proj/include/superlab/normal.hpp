#ifndef SUPERLAB_NORMAL_HPP
#define SUPERLAB_NORMAL_HPP

namespace superlab {

// Standard normal distribution function Phi(x), accurate to ~1e-16 absolute.
// Never returns 0 for finite x: the deep lower tail saturates at the smallest
// positive subnormal, so the result stays strictly positive for |x| <= 40
// (and far beyond). Monotone nondecreasing in x.
double normal_cdf(double x);

// ln Phi(x), computed without underflow for arbitrarily deep lower tails.
// Uses log(erfc) directly where erfc is representable and the Mills-ratio
// asymptotic expansion below that.
double log_normal_cdf(double x);

}  // namespace superlab

#endif
