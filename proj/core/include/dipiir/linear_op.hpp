#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>

namespace dipiir {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Matrix-free linear map with an explicit adjoint.
///
/// Both directions are checked for length on every call. The captured
/// implementation is shared and never mutated, so copies are cheap and a
/// single operator may be applied from several threads at once.
class LinearOp {
 public:
  using Fn = std::function<Vec(const Vec&)>;

  /// The empty 0 x 0 operator.
  LinearOp();
  LinearOp(Index input_len, Index output_len, Fn apply, Fn adjoint, std::string label);

  Vec apply(const Vec& u) const;
  Vec adjoint(const Vec& v) const;

  Index input_len() const noexcept { return input_len_; }
  Index output_len() const noexcept { return output_len_; }
  const std::string& label() const noexcept { return label_; }

  /// The adjoint viewed as an operator in its own right.
  LinearOp transposed() const;

 private:
  Index input_len_;
  Index output_len_;
  Fn apply_;
  Fn adjoint_;
  std::string label_;
};

LinearOp identity_op(Index n);

/// Wraps a dense matrix; mostly useful for tests and tiny problems.
LinearOp dense_op(Mat matrix, std::string label = "dense");

/// outer ∘ inner
LinearOp compose(const LinearOp& outer, const LinearOp& inner);

LinearOp scaled(const LinearOp& op, double factor);

/// Materializes the operator column by column. O(input_len) applications.
Mat to_dense(const LinearOp& op);

/// Max over `trials` random pairs of |<Au,v> - <u,A'v>| / (|Au||v| + eps).
/// Deterministic for a given seed.
double check_adjoint(const LinearOp& op, int trials, std::uint64_t seed);

}  // namespace dipiir
