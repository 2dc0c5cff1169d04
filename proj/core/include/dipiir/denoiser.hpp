#pragma once

#include "dipiir/grid.hpp"
#include "dipiir/linear_op.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace dipiir {

enum class Domain { Image, Data };

/// Length-preserving map used as a prior (stand-in for a learned network).
class Denoiser {
 public:
  using Map = std::function<Vec(const Vec&)>;
  using Params = std::vector<std::pair<std::string, double>>;

  Denoiser(std::string name, Domain domain, Map map, Params params = {})
      : name_(std::move(name)), domain_(domain), map_(std::move(map)), params_(std::move(params)) {}

  /// Throws ShapeError if the map changes the length.
  Vec operator()(const Vec& v) const;

  const std::string& name() const noexcept { return name_; }
  Domain domain() const noexcept { return domain_; }
  const Params& params() const noexcept { return params_; }

 private:
  std::string name_;
  Domain domain_;
  Map map_;
  Params params_;
};

Denoiser make_identity_denoiser(Domain domain);

/// Separable Gaussian smoothing with per-axis widths; a zero sigma leaves
/// that axis alone. Reflective boundary, kernels cut at 3 sigma, unit sum.
Vec gaussian_smooth(const Vec& v, const Grid& grid, double sigma_rows, double sigma_cols);

/// Isotropic gaussian_smooth, each channel independently.
Vec gaussian_denoise(const Vec& v, const Grid& grid, double sigma);

Denoiser make_gaussian_denoiser(const Grid& grid, double sigma, Domain domain);

struct TvOptions {
  int max_iters = 100;
  double tol = 1e-6;  // relative change of the dual field
  double step = 0.24;
};

struct TvResult {
  Vec x;
  int iterations = 0;
  bool converged = false;
};

/// Counts TV solves that stopped at max_iters; shared by copies of an agent.
struct TvStats {
  std::atomic<long> calls{0};
  std::atomic<long> not_converged{0};
};

/// argmin_u TV(u) + (1/weight) |u - v|^2 with isotropic TV per channel,
/// solved by Chambolle's dual projection iterations. weight == 0 returns v.
TvResult tv_denoise(const Vec& v, const Grid& grid, double weight, const TvOptions& options = {});

Denoiser make_tv_denoiser(const Grid& grid, double weight, const TvOptions& options, Domain domain,
                          std::shared_ptr<TvStats> stats = nullptr);

/// Smooths a data-domain estimate in the context of the observed data.
///
/// The current estimate is scattered into a copy of `context` (a full data
/// grid whose observed entries are fixed) at `missing_index`, the whole grid
/// is Gaussian smoothed, and the missing entries are read back.
Denoiser make_context_smoother(Vec context, std::vector<Index> missing_index, const Grid& grid,
                               double sigma_rows, double sigma_cols);

}  // namespace dipiir
