#pragma once

#include "dipiir/fourier.hpp"
#include "dipiir/radon.hpp"

namespace dipiir {

/// Fills the angles of `geom_full` past the first `observed_count` by
/// linear interpolation in angle between the last observed projection and
/// the parallel-beam conjugate s(theta + pi, t) = s(theta, -t) of the first.
/// `limited` holds the observed rows only; the result holds the missing rows.
Vec sinogram_complete(const Vec& limited, const CTGeometry& geom_full, Index observed_count);

/// Per channel and row, every unsampled column is linearly interpolated
/// from the nearest sampled columns (clamped at the edges). `masked` is the
/// full two-channel grid; the result lists missing entries in the compact
/// (channel, row, column) order of make_dft2_op.
Vec kspace_complete(const Vec& masked, const KSpaceMask& mask);

}  // namespace dipiir
