#pragma once

#include <cstdint>
#include <limits>

namespace phidim {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replicate `index` of a batch started from `base`:
/// mix64(mix64(base) ^ mix64(index)). Stable across releases.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(mix64(base) ^ mix64(index ^ 0x5851f42d4c957f2dULL));
}

/// Counter-based generator: the stream for (seed, stream) is
/// mix64(key + 1), mix64(key + 2), ... with key = derive_seed(seed, stream).
/// Each construction level gets its own stream, so draws do not depend on
/// evaluation order. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(derive_seed(seed, stream)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on the open interval (0,1), 53-bit resolution.
  double uniform_open() noexcept;
  /// Standard exponential, strictly positive.
  double exponential() noexcept;
  /// Index drawn from cumulative weights `cdf` (last entry is the total).
  template <class Range>
  std::size_t pick(const Range& cdf) noexcept {
    const double u = uniform_open() * cdf.back();
    std::size_t i = 0;
    while (i + 1 < cdf.size() && u >= cdf[i]) ++i;
    return i;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace phidim
