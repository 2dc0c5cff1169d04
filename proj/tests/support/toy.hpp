#pragma once

// Three agents that are proximal maps of convex quadratics
//   f_j(v) = 0.5 |B_j v - c_j|^2,   F_j(x) = argmin_v f_j(v) + lambda |v - x|^2
// on a 4-dimensional augmented state (2 image + 2 data entries). Their CE
// solution is the minimizer of sum_j mu_j f_j.

#include "dipiir/agent.hpp"
#include "dipiir/consensus.hpp"
#include "dipiir/random.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>

namespace toy {

struct Quadratic {
  Eigen::MatrixXd B;
  Eigen::VectorXd c;
};

struct Problem {
  std::array<Quadratic, 3> terms;
  double lambda = 1.0;
};

inline Problem make_problem(std::uint64_t seed, double lambda = 1.0) {
  const dipiir::CounterRng rng(seed);
  std::uint64_t k = 0;
  Problem p;
  p.lambda = lambda;
  for (auto& q : p.terms) {
    q.B.resize(3, 4);
    q.c.resize(3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 4; ++j) q.B(i, j) = rng.normal(k++);
      q.c(i) = rng.normal(k++);
    }
  }
  return p;
}

/// Square terms B_j = I + scale * N(0, 1): the weighted Hessian stays well
/// conditioned, so the linear CE rate is bounded away from 1.
inline Problem make_conditioned_problem(std::uint64_t seed, double lambda = 1.0, double scale = 0.3) {
  const dipiir::CounterRng rng(seed);
  std::uint64_t k = 0;
  Problem p;
  p.lambda = lambda;
  for (auto& q : p.terms) {
    q.B = Eigen::MatrixXd::Identity(4, 4);
    q.c.resize(4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) q.B(i, j) += scale * rng.normal(k++);
      q.c(i) = rng.normal(k++);
    }
  }
  return p;
}

inline Eigen::VectorXd prox(const Quadratic& q, double lambda, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd H = q.B.transpose() * q.B + 2.0 * lambda * Eigen::MatrixXd::Identity(4, 4);
  return H.ldlt().solve(q.B.transpose() * q.c + 2.0 * lambda * x);
}

inline dipiir::Agent make_agent(const Problem& p, int j, std::shared_ptr<long> calls = nullptr) {
  const Quadratic q = p.terms[static_cast<std::size_t>(j)];
  const double lambda = p.lambda;
  return dipiir::Agent("quad" + std::to_string(j), dipiir::SliceTag::Both,
                       [q, lambda, calls](const dipiir::AugmentedState& x) {
                         if (calls) ++*calls;
                         return dipiir::AugmentedState(2, prox(q, lambda, x.values()));
                       });
}

inline dipiir::AgentSet make_agents(const Problem& p) {
  dipiir::AgentSet s;
  s.sensor = make_agent(p, 0);
  s.data = make_agent(p, 1);
  s.image = make_agent(p, 2);
  return s;
}

/// Dense normal-equation minimizer of sum_j mu_j f_j.
inline Eigen::VectorXd minimizer(const Problem& p, const dipiir::CEWeights& mu) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(4, 4);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(4);
  const std::array<double, 3> w{mu.sensor, mu.data, mu.image};
  for (int j = 0; j < 3; ++j) {
    H += w[static_cast<std::size_t>(j)] * p.terms[static_cast<std::size_t>(j)].B.transpose() *
         p.terms[static_cast<std::size_t>(j)].B;
    g += w[static_cast<std::size_t>(j)] * p.terms[static_cast<std::size_t>(j)].B.transpose() *
         p.terms[static_cast<std::size_t>(j)].c;
  }
  return H.ldlt().solve(g);
}

}  // namespace toy
