#pragma once

#include <cstdint>

namespace genrank {

/// Counter-based splittable generator (SplitMix64 core).
///
/// Every Monte Carlo repetition in this library runs on its own stream,
/// obtained with `derive(master, stream, index)`. Streams are independent
/// for distinct (stream, index) pairs, so repetitions can execute in any
/// order, serially or in parallel, and still reproduce bit-identical
/// results for a given master seed on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix_state(state_);
  }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound), bound >= 1, unbiased (Lemire with
  /// rejection).
  std::uint32_t next_below(std::uint32_t bound) {
    while (true) {
      auto x = static_cast<std::uint32_t>(next_u64() >> 32);
      std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
      auto lo = static_cast<std::uint32_t>(m);
      if (lo < bound) {
        std::uint32_t threshold = (0u - bound) % bound;
        if (lo < threshold) continue;
      }
      return static_cast<std::uint32_t>(m >> 32);
    }
  }

  /// SplitMix64 finalizer; full-avalanche 64-bit hash.
  static std::uint64_t mix(std::uint64_t z) {
    return mix_state(z + 0x9E3779B97F4A7C15ULL);
  }

  /// Seed for one repetition of one operation. `stream` identifies the
  /// operation (and any sub-parameter such as the subsample size),
  /// `index` the repetition.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream,
                              std::uint64_t index) {
    std::uint64_t z = mix(master + 0x632BE59BD9B4E019ULL);
    z = mix(z ^ stream);
    z = mix(z ^ index);
    return z;
  }

 private:
  static std::uint64_t mix_state(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace genrank
