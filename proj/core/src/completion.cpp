#include "dipiir/completion.hpp"

#include "dipiir/error.hpp"

#include <algorithm>
#include <numbers>

namespace dipiir {

Vec sinogram_complete(const Vec& limited, const CTGeometry& geom_full, Index observed_count) {
  geom_full.validate();
  const Index total = geom_full.num_angles();
  const Index nd = geom_full.num_detectors;
  if (observed_count < 1 || observed_count > total)
    throw ConfigError("sinogram_complete: observed range must hold between 1 and " + std::to_string(total) +
                      " angles");
  if (limited.size() != observed_count * nd)
    throw ShapeError("sinogram_complete: expected " + std::to_string(observed_count * nd) + " observed entries");
  const Index missing = total - observed_count;
  Vec out(missing * nd);
  if (missing == 0) return out;

  const auto& th = geom_full.angles;
  const double last = th[static_cast<std::size_t>(observed_count - 1)];
  const double wrap = th[0] + std::numbers::pi;
  const double* s_last = limited.data() + (observed_count - 1) * nd;
  const double* s_first = limited.data();
  for (Index a = 0; a < missing; ++a) {
    const double theta = th[static_cast<std::size_t>(observed_count + a)];
    const double w = (theta - last) / (wrap - last);
    for (Index k = 0; k < nd; ++k) out[a * nd + k] = (1.0 - w) * s_last[k] + w * s_first[nd - 1 - k];
  }
  return out;
}

Vec kspace_complete(const Vec& masked, const KSpaceMask& mask) {
  mask.validate();
  const Index n = two_channel_side(masked.size());
  if (mask.rows != n || mask.cols != n) throw ShapeError("kspace_complete: mask does not match the grid");
  if (mask.sampled.size() < 2) throw ConfigError("kspace_complete: at least two sampled lines are required");

  const std::vector<Index> missing = mask.missing();
  const Index plane = n * n;
  Vec out(2 * n * static_cast<Index>(missing.size()));
  Index o = 0;
  for (Index ch = 0; ch < 2; ++ch)
    for (Index r = 0; r < n; ++r) {
      const double* row = masked.data() + ch * plane + r * n;
      for (Index c : missing) {
        const auto hi = std::upper_bound(mask.sampled.begin(), mask.sampled.end(), c);
        if (hi == mask.sampled.begin()) {
          out[o++] = row[*hi];
        } else if (hi == mask.sampled.end()) {
          out[o++] = row[*(hi - 1)];
        } else {
          const Index lo_c = *(hi - 1);
          const Index hi_c = *hi;
          const double w = static_cast<double>(c - lo_c) / static_cast<double>(hi_c - lo_c);
          out[o++] = (1.0 - w) * row[lo_c] + w * row[hi_c];
        }
      }
    }
  return out;
}

}  // namespace dipiir
