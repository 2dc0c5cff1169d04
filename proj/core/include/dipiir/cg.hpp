#pragma once

#include "dipiir/linear_op.hpp"

#include <functional>

namespace dipiir {

struct CgOptions {
  int max_iters = 20;
  double rel_tol = 1e-8;
};

struct CgResult {
  Vec x;
  int iterations = 0;
  double rel_residual = 0.0;
};

/// Minimizes |y - A v|_W^2 + lambda |v - anchor|^2 by conjugate gradients on
///   (A' W A + lambda I) v = A' W y + lambda anchor,
/// warm-started at `anchor`. An empty `weights` means W = I. The observer,
/// if set, sees every iterate including the starting point.
CgResult cg_least_squares(const LinearOp& op, const Vec& y, const Vec& weights, double lambda,
                          const Vec& anchor, const CgOptions& options = {},
                          const std::function<void(int, const Vec&)>& observer = {});

/// Value of the objective minimized by cg_least_squares.
double weighted_ls_objective(const LinearOp& op, const Vec& y, const Vec& weights, double lambda,
                             const Vec& anchor, const Vec& v);

}  // namespace dipiir
