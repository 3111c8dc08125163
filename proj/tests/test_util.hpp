#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

namespace crnoma::test {

inline std::int64_t ordered_bits(double x) {
  const auto bits = std::bit_cast<std::int64_t>(x);
  return bits < 0 ? std::numeric_limits<std::int64_t>::min() - bits : bits;
}

/// Number of representable doubles between a and b.
inline std::int64_t ulp_distance(double a, double b) {
  if (a == b) return 0;
  return std::llabs(ordered_bits(a) - ordered_bits(b));
}

/// Plain-double transcription of the ladder recursion, independent of the
/// library implementation.
struct LadderOracle {
  std::vector<double> levels;  // P_1..P_kmax
  std::vector<double> prefix;  // eta_1..eta_kmax
};

inline LadderOracle ladder_recursion_oracle(double eps, int kmax) {
  LadderOracle out;
  double eta = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double level = (k == 1) ? eps : eps * (1.0 + eta);
    eta += level;
    out.levels.push_back(level);
    out.prefix.push_back(eta);
  }
  return out;
}

/// Supported-level count by linear scan over the recursion.
inline int supported_levels_scan_oracle(double eps, double budget) {
  int n = 0;
  double eta = 0.0;
  double level = eps;
  while (std::isfinite(level) && eta + level <= budget) {
    eta += level;
    ++n;
    level = eps * (1.0 + eta);
  }
  return n;
}

}  // namespace crnoma::test
