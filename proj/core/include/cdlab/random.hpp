#pragma once

#include <cstddef>
#include <cstdint>

namespace cdlab {

/// Counter-based SplitMix64: draw i is mix(seed + (i + 1) * golden_gamma).
/// Output depends only on (seed, draw index), never on the standard
/// library's distribution implementations.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n); n > 0.
  std::size_t index(std::size_t n) noexcept { return static_cast<std::size_t>(next() % n); }

  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

} // namespace cdlab
