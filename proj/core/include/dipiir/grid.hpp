#pragma once

#include "dipiir/error.hpp"
#include "dipiir/linear_op.hpp"

#include <string>

namespace dipiir {

/// Row-major 2D layout of a flat vector, optionally with stacked channels
/// (channel-major: all of channel 0, then channel 1, ...).
struct Grid {
  Index rows = 0;
  Index cols = 0;
  Index channels = 1;

  Index plane() const noexcept { return rows * cols; }
  Index size() const noexcept { return rows * cols * channels; }

  void require(const Vec& v, const std::string& what) const {
    if (v.size() != size())
      throw ShapeError(what + ": expected " + std::to_string(size()) + " entries (" +
                       std::to_string(channels) + "x" + std::to_string(rows) + "x" +
                       std::to_string(cols) + "), got " + std::to_string(v.size()));
  }
};

/// Symmetric (edge-repeating) reflection of an index into [0, n).
inline Index reflect_index(Index i, Index n) {
  if (n == 1) return 0;
  const Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

}  // namespace dipiir
