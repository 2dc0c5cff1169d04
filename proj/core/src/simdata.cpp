#include "dipiir/simdata.hpp"

#include "dipiir/error.hpp"
#include "dipiir/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace dipiir {

namespace {

struct Ellipse {
  double x0, y0, a, b, phi_deg, intensity;
};

// Kak & Slaney's table for the original phantom.
constexpr std::array<Ellipse, 10> kSheppLogan{{
    {0.0, 0.0, 0.69, 0.92, 0.0, 2.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.98},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.02},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.02},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.01},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.01},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.01},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.01},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.01},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.01},
}};

}  // namespace

Phantom shepp_logan(Index side) {
  if (side < 16) throw ConfigError("shepp_logan: side must be >= 16");
  Phantom ph{side, Vec::Zero(side * side), "shepp-logan"};
  const double ctr = 0.5 * static_cast<double>(side - 1);
  const double scale = 2.0 / static_cast<double>(side);
  for (Index i = 0; i < side; ++i) {
    const double y = (ctr - static_cast<double>(i)) * scale;
    for (Index j = 0; j < side; ++j) {
      const double x = (static_cast<double>(j) - ctr) * scale;
      double v = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.phi_deg * std::numbers::pi / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double u = (dx * std::cos(phi) + dy * std::sin(phi)) / e.a;
        const double w = (-dx * std::sin(phi) + dy * std::cos(phi)) / e.b;
        if (u * u + w * w <= 1.0) v += e.intensity;
      }
      ph.values[i * side + j] = v;
    }
  }
  return ph;
}

Phantom centered_disk(Index side, double radius) {
  if (side < 1 || !(radius > 0.0)) throw ConfigError("centered_disk: bad parameters");
  Phantom ph{side, Vec::Zero(side * side), "disk"};
  const double ctr = 0.5 * static_cast<double>(side - 1);
  const double p = 1.0 / static_cast<double>(side);
  for (Index i = 0; i < side; ++i)
    for (Index j = 0; j < side; ++j) {
      const double x = (static_cast<double>(j) - ctr) * p;
      const double y = (ctr - static_cast<double>(i)) * p;
      if (x * x + y * y <= radius * radius) ph.values[i * side + j] = 1.0;
    }
  return ph;
}

AngleSplit make_limited_angle_set(Index num_angles_full, double keep_fraction) {
  if (num_angles_full < 2) throw ConfigError("limited angle set: need at least two angles");
  if (!(keep_fraction > 0.0 && keep_fraction < 1.0)) throw ConfigError("limited angle set: keep_fraction must lie in (0, 1)");
  // Guard against 0.5 * 180 landing a hair below 90 in floating point.
  const auto keep = static_cast<Index>(std::floor(keep_fraction * static_cast<double>(num_angles_full) + 1e-9));
  if (keep < 1 || keep >= num_angles_full)
    throw ConfigError("limited angle set: keep_fraction leaves no observed or no missing angles");
  AngleSplit s;
  for (Index a = 0; a < num_angles_full; ++a) (a < keep ? s.observed : s.missing).push_back(a);
  return s;
}

KSpaceMask make_kspace_mask(Index n, Index accel, double acs_fraction) {
  if (n < 1) throw ConfigError("k-space mask: n must be >= 1");
  if (accel < 1) throw ConfigError("k-space mask: acceleration must be >= 1");
  if (!(acs_fraction >= 0.0 && acs_fraction < 1.0)) throw ConfigError("k-space mask: acs_fraction must lie in [0, 1)");
  const auto width = static_cast<Index>(std::floor(acs_fraction * static_cast<double>(n) + 0.5));
  const Index dc = n / 2;
  const Index begin = dc - width / 2;
  if (width > n || begin < 0 || begin + width > n) throw ConfigError("k-space mask: ACS band exceeds the grid");
  KSpaceMask m;
  m.rows = n;
  m.cols = n;
  m.acs_begin = begin;
  m.acs_end = begin + width;
  for (Index c = 0; c < n; ++c) {
    const bool regular = ((c - dc) % accel + accel) % accel == 0;
    const bool acs = c >= m.acs_begin && c < m.acs_end;
    if (regular || acs) m.sampled.push_back(c);
  }
  m.validate();
  return m;
}

Vec add_gaussian_noise(const Vec& v, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ConfigError("add_gaussian_noise: sigma must be >= 0");
  if (sigma == 0.0) return v;
  const CounterRng rng(seed);
  Vec out = v;
  for (Index i = 0; i < v.size(); ++i) out[i] += sigma * rng.normal(static_cast<std::uint64_t>(i));
  return out;
}

}  // namespace dipiir
