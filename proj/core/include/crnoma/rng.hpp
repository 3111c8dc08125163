#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "crnoma/system.hpp"

namespace crnoma {

/// Seeded substream RNG.  The (master_seed, stream_index) pair fully
/// determines the sample sequence, so partitioning work across streams
/// reproduces bit-identical draws regardless of thread count or execution
/// order.  The uniform and exponential transforms are pinned here instead
/// of using <random> distributions, whose output is implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
      : gen_(derive_seed(master_seed, stream_index)) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Unit-mean exponential by inversion.
  double exponential() { return -std::log1p(-uniform01()); }

  /// Unbiased draw from [0, n) by rejection, n >= 1.
  std::uint64_t bounded(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

 private:
  // splitmix64 step: per-stream Weyl offset, then the finalizer.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t x = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

/// One Rayleigh-fading realization: |h|^2 ~ Exp(1).
inline ChannelGain sample_channel(RngStream& stream) {
  return ChannelGain{stream.exponential()};
}

}  // namespace crnoma
