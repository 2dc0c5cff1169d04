#include "dipiir/linear_op.hpp"

#include "dipiir/error.hpp"
#include "dipiir/random.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace dipiir {

namespace {

void require_len(const Vec& v, Index expected, const std::string& label, const char* direction) {
  if (v.size() != expected)
    throw ShapeError(label + " " + direction + ": expected length " + std::to_string(expected) +
                     ", got " + std::to_string(v.size()));
}

}  // namespace

LinearOp::LinearOp()
    : LinearOp(0, 0, [](const Vec& u) { return u; }, [](const Vec& v) { return v; }, "empty") {}

LinearOp::LinearOp(Index input_len, Index output_len, Fn apply, Fn adjoint, std::string label)
    : input_len_(input_len),
      output_len_(output_len),
      apply_(std::move(apply)),
      adjoint_(std::move(adjoint)),
      label_(std::move(label)) {
  if (input_len_ < 0 || output_len_ < 0) throw ShapeError(label_ + ": negative dimension");
}

Vec LinearOp::apply(const Vec& u) const {
  require_len(u, input_len_, label_, "apply");
  Vec out = apply_(u);
  require_len(out, output_len_, label_, "apply result");
  return out;
}

Vec LinearOp::adjoint(const Vec& v) const {
  require_len(v, output_len_, label_, "adjoint");
  Vec out = adjoint_(v);
  require_len(out, input_len_, label_, "adjoint result");
  return out;
}

LinearOp LinearOp::transposed() const {
  return LinearOp(output_len_, input_len_, adjoint_, apply_, label_ + "^T");
}

LinearOp identity_op(Index n) {
  auto id = [](const Vec& v) { return v; };
  return LinearOp(n, n, id, id, "identity");
}

LinearOp dense_op(Mat matrix, std::string label) {
  auto m = std::make_shared<const Mat>(std::move(matrix));
  return LinearOp(
      m->cols(), m->rows(), [m](const Vec& u) -> Vec { return *m * u; },
      [m](const Vec& v) -> Vec { return m->transpose() * v; }, std::move(label));
}

LinearOp compose(const LinearOp& outer, const LinearOp& inner) {
  if (outer.input_len() != inner.output_len())
    throw ShapeError("compose: " + outer.label() + " takes " + std::to_string(outer.input_len()) +
                     " but " + inner.label() + " produces " + std::to_string(inner.output_len()));
  return LinearOp(
      inner.input_len(), outer.output_len(),
      [outer, inner](const Vec& u) { return outer.apply(inner.apply(u)); },
      [outer, inner](const Vec& v) { return inner.adjoint(outer.adjoint(v)); },
      outer.label() + "*" + inner.label());
}

LinearOp scaled(const LinearOp& op, double factor) {
  return LinearOp(
      op.input_len(), op.output_len(), [op, factor](const Vec& u) -> Vec { return factor * op.apply(u); },
      [op, factor](const Vec& v) -> Vec { return factor * op.adjoint(v); },
      std::to_string(factor) + "*" + op.label());
}

Mat to_dense(const LinearOp& op) {
  Mat m(op.output_len(), op.input_len());
  Vec e = Vec::Zero(op.input_len());
  for (Index j = 0; j < op.input_len(); ++j) {
    e[j] = 1.0;
    m.col(j) = op.apply(e);
    e[j] = 0.0;
  }
  return m;
}

double check_adjoint(const LinearOp& op, int trials, std::uint64_t seed) {
  if (trials < 1) throw ConfigError("check_adjoint: trials must be >= 1");
  constexpr double kEps = 1e-30;
  const CounterRng rng(seed);
  const auto n = static_cast<std::uint64_t>(op.input_len());
  const auto m = static_cast<std::uint64_t>(op.output_len());
  double worst = 0.0;
  std::uint64_t counter = 0;
  for (int t = 0; t < trials; ++t) {
    Vec u(op.input_len());
    Vec v(op.output_len());
    for (std::uint64_t i = 0; i < n; ++i) u[static_cast<Index>(i)] = rng.normal(counter++);
    for (std::uint64_t i = 0; i < m; ++i) v[static_cast<Index>(i)] = rng.normal(counter++);
    const Vec au = op.apply(u);
    const Vec atv = op.adjoint(v);
    const double lhs = au.dot(v);
    const double rhs = u.dot(atv);
    worst = std::max(worst, std::abs(lhs - rhs) / (au.norm() * v.norm() + kEps));
  }
  return worst;
}

}  // namespace dipiir
