#pragma once

#include "dipiir/linear_op.hpp"

#include <vector>

namespace dipiir {

/// Cartesian phase-encode sampling pattern: whole k-space columns are either
/// acquired or skipped. Column `cols/2` is the DC line.
struct KSpaceMask {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> sampled;  // sorted, unique
  Index acs_begin = 0;         // [acs_begin, acs_end)
  Index acs_end = 0;

  void validate() const;
  bool is_sampled(Index col) const;
  std::vector<Index> missing() const;
  double net_acceleration() const {
    return static_cast<double>(cols) / static_cast<double>(sampled.size());
  }
};

/// Which k-space entries an operator produces.
enum class KSpacePart { Full, Observed, Unobserved };

/// Side length of a square two-channel grid of the given length.
Index two_channel_side(Index len);

/// Unitary, centred 2D DFT of a two-channel (real plane, imaginary plane)
/// image. With a mask, columns that were not sampled are set to zero.
Vec dft2_apply(const Vec& image_2ch, const KSpaceMask* mask = nullptr);
Vec dft2_adjoint(const Vec& kspace_2ch, const KSpaceMask* mask = nullptr);

/// Real-linear DFT operator on the two-channel grid. Observed and Unobserved
/// parts emit only the selected columns, ordered channel, row, column.
LinearOp make_dft2_op(Index n, const KSpaceMask* mask = nullptr, KSpacePart part = KSpacePart::Full);

/// Gathers the entries of a full two-channel k-space grid in the compact
/// order used by make_dft2_op, and the reverse (zero elsewhere).
Vec gather_columns(const Vec& full_2ch, Index n, const std::vector<Index>& columns);
Vec scatter_columns(const Vec& compact, Index n, const std::vector<Index>& columns);

}  // namespace dipiir
