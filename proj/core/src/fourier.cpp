#include "dipiir/fourier.hpp"

#include "dipiir/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace dipiir {

void KSpaceMask::validate() const {
  if (rows < 1 || cols < 1) throw ConfigError("KSpaceMask: empty grid");
  if (sampled.empty()) throw ConfigError("KSpaceMask: no sampled lines");
  for (std::size_t k = 0; k < sampled.size(); ++k) {
    if (sampled[k] < 0 || sampled[k] >= cols) throw ConfigError("KSpaceMask: sampled line out of range");
    if (k > 0 && sampled[k] <= sampled[k - 1]) throw ConfigError("KSpaceMask: sampled lines must be sorted and unique");
  }
  if (acs_begin < 0 || acs_end < acs_begin || acs_end > cols) throw ConfigError("KSpaceMask: bad ACS band");
  for (Index c = acs_begin; c < acs_end; ++c)
    if (!is_sampled(c)) throw ConfigError("KSpaceMask: ACS band not contained in sampled lines");
}

bool KSpaceMask::is_sampled(Index col) const {
  return std::binary_search(sampled.begin(), sampled.end(), col);
}

std::vector<Index> KSpaceMask::missing() const {
  std::vector<Index> out;
  for (Index c = 0; c < cols; ++c)
    if (!is_sampled(c)) out.push_back(c);
  return out;
}

Index two_channel_side(Index len) {
  if (len <= 0 || len % 2 != 0) throw ShapeError("two-channel grid: length must be even and positive");
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(len / 2))));
  if (n * n * 2 != len) throw ShapeError("two-channel grid: length " + std::to_string(len) + " is not 2*n^2");
  return n;
}

namespace {

// Centred unitary transform. Image pixel a sits at coordinate a - n/2 and
// k-space column k at frequency k - n/2, so both are cyclically shifted
// around the unnormalized FFT.
class CenteredDft {
 public:
  explicit CenteredDft(Index n)
      : n_(n),
        forward_(static_cast<int>(n), static_cast<int>(n), FFTW_FORWARD),
        backward_(static_cast<int>(n), static_cast<int>(n), FFTW_BACKWARD) {}

  Index n() const noexcept { return n_; }

  Vec forward(const Vec& x) const { return run(x, forward_); }
  Vec inverse(const Vec& k) const { return run(k, backward_); }

 private:
  Vec run(const Vec& in, const detail::FftPlan& plan) const {
    const Index n = n_;
    const Index h = n / 2;
    const Index plane = n * n;
    auto buf = detail::fftw_buffer(static_cast<std::size_t>(plane));
    // Move the centred grid to FFT order: unshifted m <- centred (m + h) mod n.
    for (Index r = 0; r < n; ++r) {
      const Index rs = (r + h) % n;
      for (Index c = 0; c < n; ++c) {
        const Index cs = (c + h) % n;
        const auto dst = static_cast<std::size_t>(r * n + c);
        buf[dst][0] = in[rs * n + cs];
        buf[dst][1] = in[plane + rs * n + cs];
      }
    }
    plan.execute(buf.get());
    const double scale = 1.0 / static_cast<double>(n);
    Vec out(2 * plane);
    for (Index r = 0; r < n; ++r) {
      const Index rs = (r + h) % n;
      for (Index c = 0; c < n; ++c) {
        const Index cs = (c + h) % n;
        const auto src = static_cast<std::size_t>(r * n + c);
        out[rs * n + cs] = buf[src][0] * scale;
        out[plane + rs * n + cs] = buf[src][1] * scale;
      }
    }
    return out;
  }

  Index n_;
  detail::FftPlan forward_;
  detail::FftPlan backward_;
};

void zero_unsampled(Vec& full, Index n, const KSpaceMask& mask) {
  const Index plane = n * n;
  for (Index c = 0; c < n; ++c) {
    if (mask.is_sampled(c)) continue;
    for (Index ch = 0; ch < 2; ++ch)
      for (Index r = 0; r < n; ++r) full[ch * plane + r * n + c] = 0.0;
  }
}

void require_mask_fits(const KSpaceMask& mask, Index n) {
  mask.validate();
  if (mask.rows != n || mask.cols != n)
    throw ShapeError("k-space mask is " + std::to_string(mask.rows) + "x" + std::to_string(mask.cols) +
                     " but grid is " + std::to_string(n) + "x" + std::to_string(n));
}

}  // namespace

Vec dft2_apply(const Vec& image_2ch, const KSpaceMask* mask) {
  const Index n = two_channel_side(image_2ch.size());
  Vec k = CenteredDft(n).forward(image_2ch);
  if (mask != nullptr) {
    require_mask_fits(*mask, n);
    zero_unsampled(k, n, *mask);
  }
  return k;
}

Vec dft2_adjoint(const Vec& kspace_2ch, const KSpaceMask* mask) {
  const Index n = two_channel_side(kspace_2ch.size());
  if (mask == nullptr) return CenteredDft(n).inverse(kspace_2ch);
  require_mask_fits(*mask, n);
  Vec k = kspace_2ch;
  zero_unsampled(k, n, *mask);
  return CenteredDft(n).inverse(k);
}

Vec gather_columns(const Vec& full_2ch, Index n, const std::vector<Index>& columns) {
  const Index plane = n * n;
  if (full_2ch.size() != 2 * plane) throw ShapeError("gather_columns: grid length mismatch");
  const auto m = static_cast<Index>(columns.size());
  Vec out(2 * n * m);
  Index o = 0;
  for (Index ch = 0; ch < 2; ++ch)
    for (Index r = 0; r < n; ++r)
      for (Index c : columns) out[o++] = full_2ch[ch * plane + r * n + c];
  return out;
}

Vec scatter_columns(const Vec& compact, Index n, const std::vector<Index>& columns) {
  const Index plane = n * n;
  const auto m = static_cast<Index>(columns.size());
  if (compact.size() != 2 * n * m) throw ShapeError("scatter_columns: compact length mismatch");
  Vec full = Vec::Zero(2 * plane);
  Index o = 0;
  for (Index ch = 0; ch < 2; ++ch)
    for (Index r = 0; r < n; ++r)
      for (Index c : columns) full[ch * plane + r * n + c] = compact[o++];
  return full;
}

LinearOp make_dft2_op(Index n, const KSpaceMask* mask, KSpacePart part) {
  if (n < 1) throw ShapeError("make_dft2_op: n must be >= 1");
  auto dft = std::make_shared<const CenteredDft>(n);
  const Index len = 2 * n * n;
  if (part == KSpacePart::Full) {
    if (mask == nullptr)
      return LinearOp(
          len, len, [dft](const Vec& u) { return dft->forward(u); },
          [dft](const Vec& v) { return dft->inverse(v); }, "dft2");
    require_mask_fits(*mask, n);
    auto m = std::make_shared<const KSpaceMask>(*mask);
    return LinearOp(
        len, len,
        [dft, m](const Vec& u) {
          Vec k = dft->forward(u);
          zero_unsampled(k, dft->n(), *m);
          return k;
        },
        [dft, m](const Vec& v) {
          Vec k = v;
          zero_unsampled(k, dft->n(), *m);
          return dft->inverse(k);
        },
        "dft2-masked");
  }
  if (mask == nullptr) throw ConfigError("make_dft2_op: observed/unobserved parts need a mask");
  require_mask_fits(*mask, n);
  const bool observed = part == KSpacePart::Observed;
  auto columns = std::make_shared<const std::vector<Index>>(observed ? mask->sampled : mask->missing());
  const Index out_len = 2 * n * static_cast<Index>(columns->size());
  return LinearOp(
      len, out_len, [dft, columns](const Vec& u) { return gather_columns(dft->forward(u), dft->n(), *columns); },
      [dft, columns](const Vec& v) { return dft->inverse(scatter_columns(v, dft->n(), *columns)); },
      observed ? "dft2-observed" : "dft2-unobserved");
}

}  // namespace dipiir
