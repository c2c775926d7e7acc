#ifndef SUPERLAB_RNG_HPP
#define SUPERLAB_RNG_HPP

#include <cmath>
#include <cstdint>

namespace superlab {

// Counter-based generator: every draw is a pure function of (seed, index),
// so chunked parallel evaluation reproduces the serial stream exactly.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Uniform in (0,1), never 0 or 1.
inline double bits_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Standard normal draw indexed by (seed, index) via Box-Muller.
inline double counter_gaussian(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t s = splitmix64(seed ^ splitmix64(index));
  const double u1 = bits_to_unit(s);
  const double u2 = bits_to_unit(splitmix64(s));
  constexpr double kTwoPi = 6.28318530717958647692;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace superlab

#endif
