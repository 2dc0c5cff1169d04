#pragma once

#include "dipiir/fourier.hpp"
#include "dipiir/grid.hpp"
#include "dipiir/linear_op.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dipiir {

struct Phantom {
  Index side = 0;
  Vec values;  // row-major, row 0 at the top
  std::string name;
};

/// Original ten-ellipse Shepp-Logan head on [-1, 1]^2, one sample per pixel
/// centre. Values lie in [0, 2]; side must be at least 16.
Phantom shepp_logan(Index side);

/// Unit-intensity disk of the given radius (field-of-view units) centred
/// in a side x side image spanning [-1/2, 1/2]^2.
Phantom centered_disk(Index side, double radius);

struct AngleSplit {
  std::vector<Index> observed;  // first floor(keep_fraction * total) indices
  std::vector<Index> missing;
};

AngleSplit make_limited_angle_set(Index num_angles_full, double keep_fraction);

/// Every accel-th column in phase with the DC column n/2, plus a centred ACS
/// band of round-half-up(acs_fraction * n) columns starting at n/2 - width/2.
KSpaceMask make_kspace_mask(Index n, Index accel, double acs_fraction);

/// v + sigma * N(0, 1), entry i using draw i of the seeded counter stream.
Vec add_gaussian_noise(const Vec& v, double sigma, std::uint64_t seed);

}  // namespace dipiir
