#include "dipiir/random.hpp"

#include <cmath>
#include <numbers>

namespace dipiir {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  const std::uint64_t bits = splitmix64(splitmix64(seed_) ^ splitmix64(counter + 0x632be59bd9b4e019ULL));
  // 53 random bits, shifted by half an ulp so 0 is never produced.
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const noexcept {
  const double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace dipiir
