#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "marcsim/stats.hpp"
#include "oracles.hpp"

using namespace marc;

TEST_CASE("wilson interval with no errors") {
  const double n = 1000, z = kWilsonZ;
  const double expected = z * z / (2.0 * (n + z * z));
  CHECK(wilson_half_width(0, 1000) == doctest::Approx(expected).epsilon(1e-12));
  const Interval ci = wilson_interval(0, 1000);
  CHECK(ci.lo == 0.0);
  CHECK(ci.hi == doctest::Approx(2 * expected).epsilon(1e-12));
}

TEST_CASE("wilson interval contains the estimate and narrows with n") {
  const Interval small = wilson_interval(10, 100);
  const Interval big = wilson_interval(1000, 10000);
  CHECK(small.contains(0.1));
  CHECK(big.contains(0.1));
  CHECK(big.hi - big.lo < small.hi - small.lo);
  CHECK(small.overlaps(big));
  CHECK_FALSE(wilson_interval(0, 100000).overlaps(wilson_interval(50000, 100000)));
}

TEST_CASE("empty sample gives the whole unit interval") {
  const Interval ci = wilson_interval(0, 0);
  CHECK(ci.lo == 0.0);
  CHECK(ci.hi == 1.0);
}

TEST_CASE("q function matches the frozen bpsk values") {
  for (int i = 0; i < 6; ++i) {
    const double snr = std::pow(10.0, 2.0 * i / 10.0);
    CHECK(q_function(std::sqrt(2.0 * snr)) == doctest::Approx(oracle::kBpskBer[i]).epsilon(1e-9));
  }
}
