#pragma once

#include <cstdint>

namespace dipiir {

/// Counter-based normal and uniform draws. Draw `i` of stream `seed` depends
/// only on (seed, i), so evaluation order never changes results.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const noexcept;
  /// Standard normal via Box-Muller on two derived uniforms.
  double normal(std::uint64_t counter) const noexcept;

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace dipiir
