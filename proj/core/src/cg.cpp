#include "dipiir/cg.hpp"

#include "dipiir/error.hpp"

#include <cmath>

namespace dipiir {

namespace {

Vec weighted(const Vec& weights, const Vec& r) {
  if (weights.size() == 0) return r;
  return weights.cwiseProduct(r);
}

void check_inputs(const LinearOp& op, const Vec& y, const Vec& weights, double lambda, const Vec& anchor) {
  if (op.input_len() == 0 || op.output_len() == 0)
    throw ShapeError("cg_least_squares: zero-dimensional operator " + op.label());
  if (y.size() != op.output_len()) throw ShapeError("cg_least_squares: y length does not match " + op.label());
  if (anchor.size() != op.input_len())
    throw ShapeError("cg_least_squares: anchor length does not match " + op.label());
  if (weights.size() != 0 && weights.size() != op.output_len())
    throw ShapeError("cg_least_squares: weight length does not match " + op.label());
  if (!y.allFinite() || !anchor.allFinite() || !weights.allFinite() || !std::isfinite(lambda))
    throw NumericError("cg_least_squares: non-finite input");
  if (lambda < 0.0) throw ConfigError("cg_least_squares: lambda must be >= 0");
}

}  // namespace

double weighted_ls_objective(const LinearOp& op, const Vec& y, const Vec& weights, double lambda,
                             const Vec& anchor, const Vec& v) {
  const Vec r = y - op.apply(v);
  return r.dot(weighted(weights, r)) + lambda * (v - anchor).squaredNorm();
}

CgResult cg_least_squares(const LinearOp& op, const Vec& y, const Vec& weights, double lambda,
                          const Vec& anchor, const CgOptions& options,
                          const std::function<void(int, const Vec&)>& observer) {
  check_inputs(op, y, weights, lambda, anchor);
  auto normal = [&](const Vec& v) -> Vec { return op.adjoint(weighted(weights, op.apply(v))) + lambda * v; };

  const Vec b = op.adjoint(weighted(weights, y)) + lambda * anchor;
  const double b_norm = b.norm();
  const double scale = b_norm > 0.0 ? b_norm : 1.0;

  CgResult res;
  res.x = anchor;
  Vec r = b - normal(res.x);
  Vec p = r;
  double rr = r.squaredNorm();
  res.rel_residual = std::sqrt(rr) / scale;
  if (observer) observer(0, res.x);

  while (res.iterations < options.max_iters && res.rel_residual >= options.rel_tol) {
    const Vec hp = normal(p);
    const double php = p.dot(hp);
    if (!(php > 0.0)) {
      // Curvature vanished along p: the residual lies in the null space.
      if (!std::isfinite(php)) throw NumericError("cg_least_squares: non-finite curvature");
      break;
    }
    const double alpha = rr / php;
    res.x += alpha * p;
    r -= alpha * hp;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++res.iterations;
    res.rel_residual = std::sqrt(rr) / scale;
    if (!std::isfinite(res.rel_residual)) throw NumericError("cg_least_squares: iterate became non-finite");
    if (observer) observer(res.iterations, res.x);
  }
  return res;
}

}  // namespace dipiir
