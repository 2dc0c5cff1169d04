#include "dipiir/metrics.hpp"

#include "dipiir/error.hpp"

#include <cmath>

namespace dipiir {

namespace {

void require_same(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) throw ShapeError(std::string(what) + ": length mismatch");
  if (a.size() == 0) throw ShapeError(std::string(what) + ": empty input");
}

}  // namespace

double rmse(const Vec& a, const Vec& b) {
  require_same(a, b, "rmse");
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double psnr(const Vec& a, const Vec& b, double peak) {
  require_same(a, b, "psnr");
  if (!(peak > 0.0)) throw ConfigError("psnr: peak must be positive");
  const double mse = (a - b).squaredNorm() / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

double nmse(const Vec& a, const Vec& b) {
  require_same(a, b, "nmse");
  const double ref = b.squaredNorm();
  if (ref == 0.0) throw NumericError("nmse: reference has zero norm");
  return (a - b).squaredNorm() / ref;
}

double ssim(const Vec& a, const Vec& b, const Grid& grid, const SsimOptions& options) {
  require_same(a, b, "ssim");
  grid.require(a, "ssim");
  if (grid.channels != 1) throw ShapeError("ssim: single-channel grids only");
  const Index w = options.window;
  if (w < 1 || w % 2 == 0 || w > grid.rows || w > grid.cols) throw ConfigError("ssim: bad window size");

  const Index r = w / 2;
  Vec g1(w);
  for (Index k = 0; k < w; ++k) g1[k] = std::exp(-0.5 * static_cast<double>((k - r) * (k - r)) / (options.sigma * options.sigma));
  g1 /= g1.sum();
  const Mat win = g1 * g1.transpose();

  const double range = b.maxCoeff() - b.minCoeff();
  const double c1 = (options.k1 * range) * (options.k1 * range);
  const double c2 = (options.k2 * range) * (options.k2 * range);

  const Index cols = grid.cols;
  double total = 0.0;
  Index count = 0;
  for (Index i = r; i + r < grid.rows; ++i)
    for (Index j = r; j + r < cols; ++j) {
      double ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
      for (Index u = 0; u < w; ++u)
        for (Index v = 0; v < w; ++v) {
          const Index k = (i + u - r) * cols + (j + v - r);
          const double wt = win(u, v);
          ma += wt * a[k];
          mb += wt * b[k];
          saa += wt * a[k] * a[k];
          sbb += wt * b[k] * b[k];
          sab += wt * a[k] * b[k];
        }
      const double va = saa - ma * ma;
      const double vb = sbb - mb * mb;
      const double cov = sab - ma * mb;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / static_cast<double>(count);
}

MetricsReport compute_metrics(const Vec& recon, const Vec& reference, const Grid& grid) {
  MetricsReport m;
  m.peak = reference.maxCoeff() - reference.minCoeff();
  if (!(m.peak > 0.0)) throw NumericError("metrics: reference has zero dynamic range");
  m.rmse = rmse(recon, reference);
  m.psnr = psnr(recon, reference, m.peak);
  m.nmse = nmse(recon, reference);
  m.ssim = ssim(recon, reference, grid, m.window);
  return m;
}

Vec magnitude(const Vec& two_channel) {
  if (two_channel.size() % 2 != 0) throw ShapeError("magnitude: odd length");
  const Index half = two_channel.size() / 2;
  return (two_channel.head(half).array().square() + two_channel.tail(half).array().square()).sqrt().matrix();
}

}  // namespace dipiir
