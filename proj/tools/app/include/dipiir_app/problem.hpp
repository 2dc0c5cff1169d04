#pragma once

#include "dipiir_app/config.hpp"

#include "dipiir/agents.hpp"
#include "dipiir/consensus.hpp"
#include "dipiir/fourier.hpp"
#include "dipiir/radon.hpp"
#include "dipiir/tensor_io.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dipiir::app {

/// Everything `simulate` writes: the ground truth, the clean full data, the
/// noisy observation and (CT / MRI) the sampling pattern.
struct Simulation {
  std::string problem;
  Tensor phantom;
  Tensor full;
  Tensor observed;
  std::optional<Tensor> pattern;
};

Simulation simulate(const RunConfig& cfg);

/// A reconstruction problem in augmented-state form.
struct Problem {
  std::string kind;
  Grid image_grid;   // two channels for MRI
  Grid truth_grid;   // real, single channel
  Vec truth;
  std::vector<std::uint64_t> image_dims;
  std::vector<std::uint64_t> data_dims;

  SensorModel sensor;
  LinearOp a_unobs;
  /// Static estimate of the data slice (completed data or pre-filtered data).
  Vec v0;

  /// Geometry of the full data grid and the positions the data slice fills.
  Grid data_grid;
  Vec data_context;
  std::vector<Index> missing_index;

  /// Analytic image from an estimate of the data slice.
  std::function<Vec(const Vec&)> invert;
  /// Real image scored against the truth.
  std::function<Vec(const Vec&)> evaluate;

  // CT only
  std::optional<CTGeometry> geom_full;
  std::optional<CTGeometry> geom_obs;
  std::optional<CTGeometry> geom_miss;
  // MRI only
  std::optional<KSpaceMask> mask;

  Index image_len() const { return sensor.image_len; }
  Index data_len() const { return sensor.data_len(); }
};

Problem build_problem(const RunConfig& cfg, const Simulation& sim);

/// CE parameters taken from the ce.* keys.
CEParams ce_params(const RunConfig& cfg);

struct PipelineResult {
  Vec image;
  std::optional<Vec> data;
  std::optional<ConvergenceTrace> trace;
  long data_agent_calls = 0;
  long tv_unconverged = 0;
  std::vector<std::string> notes;
};

/// The three agents for a CE pipeline; `data_calls` counts data-agent
/// evaluations.
AgentSet build_agents(const Problem& p, const RunConfig& cfg, const std::shared_ptr<std::atomic<long>>& data_calls,
                      const std::shared_ptr<TvStats>& tv_stats);

/// Initial stacked state for the configured `init` scheme.
StackedState initial_state(const Problem& p, const RunConfig& cfg);

PipelineResult run_pipeline(const Problem& p, const RunConfig& cfg);

}  // namespace dipiir::app
