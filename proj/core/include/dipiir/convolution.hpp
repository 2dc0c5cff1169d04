#pragma once

#include "dipiir/linear_op.hpp"

namespace dipiir {

/// 2D convolution of a side x side image with an odd-sized stencil and
/// reflective boundary. The adjoint is the matching correlation, folded back
/// through the same reflection.
LinearOp make_blur_op(const Mat& kernel, Index image_side);

/// Keeps every factor-th pixel along both axes; adjoint inserts zeros.
LinearOp make_subsample_op(Index factor, Index image_side);

/// Normalized (unit-sum) isotropic Gaussian stencil truncated at 3 sigma.
Mat gaussian_kernel(double sigma);

}  // namespace dipiir
