#pragma once

#include "dipiir/agent.hpp"
#include "dipiir/block_op.hpp"
#include "dipiir/cg.hpp"
#include "dipiir/denoiser.hpp"

#include <memory>

namespace dipiir {

struct NonnegFlags {
  bool image = false;
  bool data = false;
};

/// Observation vector, augmented-state sensing operator and diagonal data
/// weights of the quadratic sensor agent.
struct SensorModel {
  Vec y;
  LinearOp A;
  Vec weights;
  Index image_len = 0;

  Index data_len() const noexcept { return A.input_len() - image_len; }
  /// Throws ShapeError/ConfigError if the lengths disagree or a weight is negative.
  void validate() const;
};

/// y = (y_obs; 0), A = [[a_obs, 0], [a_unobs, -I]], W = I.
SensorModel make_incomplete_sensor_model(const Vec& y_obs, const BlockIncompleteOp& op);
/// y = (y_noisy; 0), A = [[blur, 0], [blur, -I]]; data slice is the clean blurred image.
SensorModel make_deblur_sensor_model(const Vec& y_noisy, const LinearOp& blur);
/// y = (y_lowres; 0), A = [[sub * blur, 0], [blur, -I]].
SensorModel make_superres_sensor_model(const Vec& y_lowres, const LinearOp& blur, const LinearOp& sub);

/// argmin_v |y - A v|_W^2 + lambda_s |v - x|^2 by warm-started CG, then
/// negative entries clamped on the flagged slices.
AugmentedState sensor_agent(const AugmentedState& x, const SensorModel& model, double lambda_s,
                            const CgOptions& cg = {}, NonnegFlags nonneg = {});

/// Closed-form proximal map of |v0 - S v|^2: data <- (v0 + lambda_d data) / (1 + lambda_d).
AugmentedState explicit_data_agent(const AugmentedState& x, const Vec& v0_data, double lambda_d,
                                   bool nonneg_data = false);

AugmentedState implicit_data_agent(const AugmentedState& x, const Denoiser& denoiser);

AugmentedState image_agent(const AugmentedState& x, const Denoiser& denoiser);

/// argmin_v TV(v) + lambda_i |v - image|^2 on the image slice.
AugmentedState tv_image_agent(const AugmentedState& x, double lambda_i, const Grid& grid,
                              const TvOptions& options = {}, bool nonneg = false, TvStats* stats = nullptr);

Agent make_sensor_agent(SensorModel model, double lambda_s, CgOptions cg = {}, NonnegFlags nonneg = {});
Agent make_explicit_data_agent(Vec v0_data, double lambda_d, bool nonneg_data = false);
Agent make_implicit_data_agent(Denoiser denoiser);
Agent make_image_agent(Denoiser denoiser);
Agent make_tv_image_agent(double lambda_i, const Grid& grid, TvOptions options = {}, bool nonneg = false,
                          std::shared_ptr<TvStats> stats = nullptr);

}  // namespace dipiir
