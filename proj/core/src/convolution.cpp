#include "dipiir/convolution.hpp"

#include "dipiir/error.hpp"
#include "dipiir/grid.hpp"

#include <cmath>
#include <memory>

namespace dipiir {

namespace {

struct Stencil {
  Mat kernel;
  Index side;
};

Vec blur_forward(const Stencil& s, const Vec& in) {
  const Index n = s.side;
  const Index rr = s.kernel.rows() / 2;
  const Index rc = s.kernel.cols() / 2;
  Vec out = Vec::Zero(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      double acc = 0.0;
      for (Index a = 0; a < s.kernel.rows(); ++a)
        for (Index b = 0; b < s.kernel.cols(); ++b)
          acc += s.kernel(a, b) * in[reflect_index(i - (a - rr), n) * n + reflect_index(j - (b - rc), n)];
      out[i * n + j] = acc;
    }
  return out;
}

Vec blur_transpose(const Stencil& s, const Vec& in) {
  const Index n = s.side;
  const Index rr = s.kernel.rows() / 2;
  const Index rc = s.kernel.cols() / 2;
  Vec out = Vec::Zero(n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = in[i * n + j];
      for (Index a = 0; a < s.kernel.rows(); ++a)
        for (Index b = 0; b < s.kernel.cols(); ++b)
          out[reflect_index(i - (a - rr), n) * n + reflect_index(j - (b - rc), n)] += s.kernel(a, b) * v;
    }
  return out;
}

}  // namespace

LinearOp make_blur_op(const Mat& kernel, Index image_side) {
  if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0)
    throw ConfigError("make_blur_op: kernel dimensions must be odd");
  if (image_side < 1) throw ConfigError("make_blur_op: image_side must be >= 1");
  if (!kernel.allFinite()) throw NumericError("make_blur_op: non-finite kernel");
  auto s = std::make_shared<const Stencil>(Stencil{kernel, image_side});
  const Index len = image_side * image_side;
  return LinearOp(
      len, len, [s](const Vec& u) { return blur_forward(*s, u); },
      [s](const Vec& v) { return blur_transpose(*s, v); }, "blur");
}

LinearOp make_subsample_op(Index factor, Index image_side) {
  if (factor < 1) throw ConfigError("make_subsample_op: factor must be >= 1");
  if (image_side < 1 || image_side % factor != 0)
    throw ConfigError("make_subsample_op: factor " + std::to_string(factor) + " does not divide image side " +
                      std::to_string(image_side));
  const Index n = image_side;
  const Index m = n / factor;
  return LinearOp(
      n * n, m * m,
      [n, m, factor](const Vec& u) {
        Vec out(m * m);
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < m; ++j) out[i * m + j] = u[(i * factor) * n + j * factor];
        return out;
      },
      [n, m, factor](const Vec& v) {
        Vec out = Vec::Zero(n * n);
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < m; ++j) out[(i * factor) * n + j * factor] = v[i * m + j];
        return out;
      },
      "subsample");
}

Mat gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_kernel: sigma must be positive");
  const auto r = static_cast<Index>(std::ceil(3.0 * sigma - 1e-12));
  Vec g(2 * r + 1);
  for (Index k = -r; k <= r; ++k) g[k + r] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
  g /= g.sum();
  return g * g.transpose();
}

}  // namespace dipiir
