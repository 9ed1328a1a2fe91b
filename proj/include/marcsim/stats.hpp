#pragma once

#include <cstdint>

namespace marc {

// Two-sided z used for every confidence interval in the tool (3 sigma).
inline constexpr double kWilsonZ = 3.0;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return lo <= x && x <= hi; }
  bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

// Wilson score interval for k successes in n trials. n == 0 gives [0, 1].
Interval wilson_interval(std::uint64_t k, std::uint64_t n, double z = kWilsonZ);
double wilson_half_width(std::uint64_t k, std::uint64_t n, double z = kWilsonZ);

// Gaussian tail probability.
double q_function(double x);

}  // namespace marc
