#pragma once

#include "dipiir/linear_op.hpp"

#include <string>
#include <vector>

namespace dipiir {

/// Parallel-beam acquisition geometry for a square image centred on the
/// rotation axis. Detector bins are centred on the axis as well.
struct CTGeometry {
  Index image_side = 0;
  double pixel_size = 0.0;
  std::vector<double> angles;  // radians, strictly increasing in [0, pi)
  Index num_detectors = 0;
  double detector_spacing = 0.0;

  Index num_angles() const noexcept { return static_cast<Index>(angles.size()); }
  Index image_len() const noexcept { return image_side * image_side; }
  Index sinogram_len() const noexcept { return num_angles() * num_detectors; }

  /// Offset of detector bin `k` from the rotation axis.
  double detector_offset(Index k) const noexcept {
    return (static_cast<double>(k) - 0.5 * static_cast<double>(num_detectors - 1)) * detector_spacing;
  }

  /// Throws ConfigError when the invariants do not hold.
  void validate() const;

  /// Same image and detector, keeping only the listed angles (in order).
  CTGeometry subset(const std::vector<Index>& angle_indices) const;

  /// `num_angles` uniform angles over [0, pi), unit field of view, and the
  /// smallest odd detector count covering the image diagonal.
  static CTGeometry uniform(Index image_side, Index num_angles);
};

/// Smallest odd integer >= side * sqrt(2).
Index default_detector_count(Index image_side);

/// Ray-driven projector with linear interpolation along the minor image axis.
Vec radon_apply(const Vec& image, const CTGeometry& geom);
/// Exact transpose of radon_apply's discretization.
Vec radon_adjoint(const Vec& sinogram, const CTGeometry& geom);

LinearOp make_radon_op(const CTGeometry& geom);

enum class FilterKind { RamLak };

FilterKind parse_filter(const std::string& name);

/// Ramp-filtered, linearly interpolated backprojection scaled by pi/num_angles.
/// Rows of missing angles can be left at zero (zero-padded limited data).
Vec fbp(const Vec& sinogram, const CTGeometry& geom, FilterKind filter = FilterKind::RamLak);

}  // namespace dipiir
