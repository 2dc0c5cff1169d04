#pragma once

#include "dipiir/agent.hpp"
#include "dipiir/state.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dipiir {

struct CEWeights {
  double sensor = 1.0 / 3.0;
  double data = 1.0 / 3.0;
  double image = 1.0 / 3.0;

  double operator[](Role r) const noexcept {
    return r == Role::Sensor ? sensor : (r == Role::Data ? data : image);
  }
};

/// Raw CE parameters; CEConfig validates them.
struct CEParams {
  CEWeights mu;
  double rho = 0.5;
  int max_ce_iters = 4;
  double residual_tol = 1e-6;
  double lambda_s = 1.0;
  double lambda_d = 1.0;
  double lambda_i = 1.0;
  bool nonneg_image = false;
  bool nonneg_data = false;
  /// Evaluate the three agents of F on separate threads.
  bool concurrent_agents = false;
  /// Evaluate consensus gaps after every iteration (costs one extra F).
  bool record_gaps = true;
};

/// Validated CE parameters: weights non-negative and summing to 1 within
/// 1e-12, rho in (0, 1), positive proximal strengths, at least one iteration.
class CEConfig {
 public:
  explicit CEConfig(const CEParams& params);

  const CEParams& params() const noexcept { return p_; }
  const CEWeights& mu() const noexcept { return p_.mu; }
  double rho() const noexcept { return p_.rho; }

 private:
  CEParams p_;
};

struct TraceRecord {
  int iter = 0;
  /// |x(k+1) - x(k)| / |x(k)| over the whole stacked state.
  double mann_residual = 0.0;
  /// The same step measured in the mu-weighted norm, unnormalized.
  double weighted_step = 0.0;
  double gap_s = 0.0;
  double gap_d = 0.0;
  double gap_i = 0.0;
  std::optional<double> psnr;
};

struct ConvergenceTrace {
  std::vector<TraceRecord> records;
};

/// CSV with header iter,mann_residual,gap_s,gap_d,gap_i,psnr.
void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace);

AugmentedState weighted_average(const StackedState& s, const CEConfig& cfg);
StackedState apply_G(const StackedState& s, const CEConfig& cfg);
/// 2G(s) - s
StackedState reflect_G(const StackedState& s, const CEConfig& cfg);
StackedState apply_F(const StackedState& s, const AgentSet& agents, bool concurrent = false);

/// One Mann update (1 - rho) s + rho (2F - I)(2G - I) s. Agents whose weight
/// is zero are skipped and act as the identity.
StackedState mann_step(const StackedState& s, const AgentSet& agents, const CEConfig& cfg);

struct ConsensusGaps {
  double sensor = 0.0;
  double data = 0.0;
  double image = 0.0;
};

/// |F_j(u_j) - <s>| per agent with u = (2G - I) s; all zero when s is a
/// fixed point of the Mann map.
ConsensusGaps consensus_gap(const StackedState& s, const AgentSet& agents, const CEConfig& cfg);

struct CEResult {
  AugmentedState solution;
  StackedState final_state;
  ConvergenceTrace trace;
};

/// Scores the image slice of the current consensus point (e.g. PSNR against
/// a ground truth) for the trace.
using TraceScorer = std::function<double(const AugmentedState&)>;

/// Mann iterations until max_ce_iters or the relative residual drops below
/// residual_tol. The solution is the weighted average of the final iterate.
CEResult run_dipiir(const StackedState& init, const AgentSet& agents, const CEConfig& cfg,
                    const TraceScorer& scorer = {});

}  // namespace dipiir
