#pragma once

#include "dipiir/linear_op.hpp"

namespace dipiir {

/// Incomplete-data sensing operator over an augmented (image, data) vector:
///
///   [ a_obs    0 ] [image]   [ a_obs image            ]
///   [ a_unobs -I ] [data ] = [ a_unobs image - data   ]
struct BlockIncompleteOp {
  LinearOp a_obs;
  LinearOp a_unobs;
  LinearOp composed;

  Index image_len() const noexcept { return a_obs.input_len(); }
  Index data_len() const noexcept { return a_unobs.output_len(); }
};

BlockIncompleteOp make_incomplete_op(const LinearOp& a_obs, const LinearOp& a_unobs);

}  // namespace dipiir
