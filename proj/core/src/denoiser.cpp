#include "dipiir/denoiser.hpp"

#include "dipiir/error.hpp"

#include <algorithm>
#include <cmath>

namespace dipiir {

Vec Denoiser::operator()(const Vec& v) const {
  Vec out = map_(v);
  if (out.size() != v.size())
    throw ShapeError("denoiser " + name_ + " changed length " + std::to_string(v.size()) + " -> " +
                     std::to_string(out.size()));
  return out;
}

Denoiser make_identity_denoiser(Domain domain) {
  return Denoiser("identity", domain, [](const Vec& v) { return v; });
}

namespace {

Vec gaussian_taps(double sigma) {
  const auto r = static_cast<Index>(std::ceil(3.0 * sigma - 1e-12));
  Vec g(2 * r + 1);
  for (Index k = -r; k <= r; ++k) g[k + r] = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
  return g / g.sum();
}

}  // namespace

Vec gaussian_smooth(const Vec& v, const Grid& grid, double sigma_rows, double sigma_cols) {
  grid.require(v, "gaussian_smooth");
  if (sigma_rows < 0.0 || sigma_cols < 0.0) throw ConfigError("gaussian_smooth: sigma must be >= 0");
  Vec out = v;
  const Index rows = grid.rows;
  const Index cols = grid.cols;
  if (sigma_cols > 0.0) {
    const Vec g = gaussian_taps(sigma_cols);
    const Index r = g.size() / 2;
    Vec tmp(out.size());
    for (Index ch = 0; ch < grid.channels; ++ch) {
      const Index base = ch * grid.plane();
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
          double acc = 0.0;
          for (Index k = -r; k <= r; ++k) acc += g[k + r] * out[base + i * cols + reflect_index(j + k, cols)];
          tmp[base + i * cols + j] = acc;
        }
    }
    out = std::move(tmp);
  }
  if (sigma_rows > 0.0) {
    const Vec g = gaussian_taps(sigma_rows);
    const Index r = g.size() / 2;
    Vec tmp(out.size());
    for (Index ch = 0; ch < grid.channels; ++ch) {
      const Index base = ch * grid.plane();
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
          double acc = 0.0;
          for (Index k = -r; k <= r; ++k) acc += g[k + r] * out[base + reflect_index(i + k, rows) * cols + j];
          tmp[base + i * cols + j] = acc;
        }
    }
    out = std::move(tmp);
  }
  return out;
}

Vec gaussian_denoise(const Vec& v, const Grid& grid, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian_denoise: sigma must be positive");
  return gaussian_smooth(v, grid, sigma, sigma);
}

Denoiser make_gaussian_denoiser(const Grid& grid, double sigma, Domain domain) {
  if (!(sigma > 0.0)) throw ConfigError("gaussian denoiser: sigma must be positive");
  return Denoiser(
      "gaussian", domain, [grid, sigma](const Vec& v) { return gaussian_denoise(v, grid, sigma); },
      {{"sigma", sigma}});
}

namespace {

// Forward differences with a zero last row/column, and the divergence that
// is their negative adjoint.
void gradient(const double* u, Index rows, Index cols, double* gx, double* gy) {
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const Index k = i * cols + j;
      gx[k] = j + 1 < cols ? u[k + 1] - u[k] : 0.0;
      gy[k] = i + 1 < rows ? u[k + cols] - u[k] : 0.0;
    }
}

void divergence(const double* px, const double* py, Index rows, Index cols, double* out) {
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const Index k = i * cols + j;
      const double dx = (j + 1 < cols ? px[k] : 0.0) - (j > 0 ? px[k - 1] : 0.0);
      const double dy = (i + 1 < rows ? py[k] : 0.0) - (i > 0 ? py[k - cols] : 0.0);
      out[k] = dx + dy;
    }
}

}  // namespace

TvResult tv_denoise(const Vec& v, const Grid& grid, double weight, const TvOptions& options) {
  grid.require(v, "tv_denoise");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw ConfigError("tv_denoise: weight must be >= 0");
  if (options.max_iters < 1 || !(options.step > 0.0)) throw ConfigError("tv_denoise: bad solver options");
  TvResult res;
  res.x = v;
  res.converged = true;
  if (weight == 0.0) return res;

  // argmin_u 1/2 |u - f|^2 + lam TV(u), lam = weight / 2.
  const double lam = 0.5 * weight;
  const Index plane = grid.plane();
  Vec px(plane), py(plane), gx(plane), gy(plane), div(plane), d(plane);
  for (Index ch = 0; ch < grid.channels; ++ch) {
    const double* f = v.data() + ch * plane;
    px.setZero();
    py.setZero();
    bool converged = false;
    int it = 0;
    while (it < options.max_iters) {
      ++it;
      divergence(px.data(), py.data(), grid.rows, grid.cols, div.data());
      for (Index k = 0; k < plane; ++k) d[k] = div[k] - f[k] / lam;
      gradient(d.data(), grid.rows, grid.cols, gx.data(), gy.data());
      double change_sq = 0.0;
      double norm_sq = 0.0;
      for (Index k = 0; k < plane; ++k) {
        const double denom = 1.0 + options.step * std::hypot(gx[k], gy[k]);
        const double nx = (px[k] + options.step * gx[k]) / denom;
        const double ny = (py[k] + options.step * gy[k]) / denom;
        change_sq += (nx - px[k]) * (nx - px[k]) + (ny - py[k]) * (ny - py[k]);
        norm_sq += nx * nx + ny * ny;
        px[k] = nx;
        py[k] = ny;
      }
      if (change_sq <= options.tol * options.tol * norm_sq) {
        converged = true;
        break;
      }
    }
    divergence(px.data(), py.data(), grid.rows, grid.cols, div.data());
    for (Index k = 0; k < plane; ++k) res.x[ch * plane + k] = f[k] - lam * div[k];
    res.iterations = std::max(res.iterations, it);
    res.converged = res.converged && converged;
  }
  return res;
}

Denoiser make_tv_denoiser(const Grid& grid, double weight, const TvOptions& options, Domain domain,
                          std::shared_ptr<TvStats> stats) {
  return Denoiser(
      "tv", domain,
      [grid, weight, options, stats](const Vec& v) {
        TvResult r = tv_denoise(v, grid, weight, options);
        if (stats) {
          ++stats->calls;
          if (!r.converged) ++stats->not_converged;
        }
        return std::move(r.x);
      },
      {{"weight", weight}, {"max_iters", options.max_iters}, {"tol", options.tol}});
}

Denoiser make_context_smoother(Vec context, std::vector<Index> missing_index, const Grid& grid,
                               double sigma_rows, double sigma_cols) {
  grid.require(context, "context smoother");
  for (Index k : missing_index)
    if (k < 0 || k >= context.size()) throw ShapeError("context smoother: missing index out of range");
  auto ctx = std::make_shared<const Vec>(std::move(context));
  auto idx = std::make_shared<const std::vector<Index>>(std::move(missing_index));
  return Denoiser(
      "context-smoother", Domain::Data,
      [ctx, idx, grid, sigma_rows, sigma_cols](const Vec& x) {
        if (x.size() != static_cast<Index>(idx->size()))
          throw ShapeError("context smoother: expected " + std::to_string(idx->size()) + " entries");
        Vec full = *ctx;
        for (std::size_t k = 0; k < idx->size(); ++k) full[(*idx)[k]] = x[static_cast<Index>(k)];
        const Vec smooth = gaussian_smooth(full, grid, sigma_rows, sigma_cols);
        Vec out(x.size());
        for (std::size_t k = 0; k < idx->size(); ++k) out[static_cast<Index>(k)] = smooth[(*idx)[k]];
        return out;
      },
      {{"sigma_rows", sigma_rows}, {"sigma_cols", sigma_cols}});
}

}  // namespace dipiir
