#include "dipiir/agents.hpp"

#include "dipiir/error.hpp"

#include <memory>

namespace dipiir {

void SensorModel::validate() const {
  if (image_len < 0 || image_len > A.input_len()) throw ShapeError("SensorModel: image length exceeds state length");
  if (y.size() != A.output_len())
    throw ShapeError("SensorModel: y has " + std::to_string(y.size()) + " entries, A produces " +
                     std::to_string(A.output_len()));
  if (weights.size() != 0 && weights.size() != y.size()) throw ShapeError("SensorModel: weight length mismatch");
  if (weights.size() != 0 && (weights.array() < 0.0).any()) throw ConfigError("SensorModel: weights must be >= 0");
}

namespace {

// Stacks [top; bottom - I * data] for the two-row block operators of the
// deblurring and super-resolution models.
SensorModel two_block_model(const Vec& y_top, const LinearOp& top, const LinearOp& bottom) {
  const BlockIncompleteOp op = make_incomplete_op(top, bottom);
  if (y_top.size() != top.output_len())
    throw ShapeError("sensor model: observation has " + std::to_string(y_top.size()) + " entries, operator produces " +
                     std::to_string(top.output_len()));
  return make_incomplete_sensor_model(y_top, op);
}

}  // namespace

SensorModel make_incomplete_sensor_model(const Vec& y_obs, const BlockIncompleteOp& op) {
  if (y_obs.size() != op.a_obs.output_len()) throw ShapeError("incomplete sensor model: y_obs length mismatch");
  SensorModel m{Vec::Zero(op.composed.output_len()), op.composed, Vec::Ones(op.composed.output_len()), op.image_len()};
  m.y.head(y_obs.size()) = y_obs;
  m.validate();
  return m;
}

SensorModel make_deblur_sensor_model(const Vec& y_noisy, const LinearOp& blur) {
  if (blur.input_len() != blur.output_len()) throw ShapeError("deblur model: blur must be square on image space");
  return two_block_model(y_noisy, blur, blur);
}

SensorModel make_superres_sensor_model(const Vec& y_lowres, const LinearOp& blur, const LinearOp& sub) {
  if (blur.input_len() != blur.output_len()) throw ShapeError("super-resolution model: blur must be square");
  return two_block_model(y_lowres, compose(sub, blur), blur);
}

AugmentedState sensor_agent(const AugmentedState& x, const SensorModel& model, double lambda_s, const CgOptions& cg,
                            NonnegFlags nonneg) {
  if (!(lambda_s > 0.0)) throw ConfigError("sensor agent: lambda_s must be positive");
  if (x.size() != model.A.input_len() || x.image_len() != model.image_len)
    throw ShapeError("sensor agent: state does not match the sensing operator");
  CgResult r = cg_least_squares(model.A, model.y, model.weights, lambda_s, x.values(), cg);
  AugmentedState out(x.image_len(), std::move(r.x));
  if (nonneg.image) out.image() = out.image().cwiseMax(0.0);
  if (nonneg.data) out.data() = out.data().cwiseMax(0.0);
  return out;
}

AugmentedState explicit_data_agent(const AugmentedState& x, const Vec& v0_data, double lambda_d, bool nonneg_data) {
  if (!(lambda_d > 0.0)) throw ConfigError("explicit data agent: lambda_d must be positive");
  if (v0_data.size() != x.data_len())
    throw ShapeError("explicit data agent: v0 has " + std::to_string(v0_data.size()) + " entries, data slice has " +
                     std::to_string(x.data_len()));
  AugmentedState out = x;
  out.data() = (v0_data + lambda_d * x.data()) / (1.0 + lambda_d);
  if (nonneg_data) out.data() = out.data().cwiseMax(0.0);
  return out;
}

AugmentedState implicit_data_agent(const AugmentedState& x, const Denoiser& denoiser) {
  AugmentedState out = x;
  try {
    out.data() = denoiser(x.data());
  } catch (const std::exception& e) {
    throw AgentError("data-implicit", e.what());
  }
  return out;
}

AugmentedState image_agent(const AugmentedState& x, const Denoiser& denoiser) {
  AugmentedState out = x;
  try {
    out.image() = denoiser(x.image());
  } catch (const std::exception& e) {
    throw AgentError("image", e.what());
  }
  return out;
}

AugmentedState tv_image_agent(const AugmentedState& x, double lambda_i, const Grid& grid, const TvOptions& options,
                              bool nonneg, TvStats* stats) {
  if (!(lambda_i > 0.0)) throw ConfigError("tv image agent: lambda_i must be positive");
  TvResult r = tv_denoise(x.image(), grid, 1.0 / lambda_i, options);
  if (stats) {
    ++stats->calls;
    if (!r.converged) ++stats->not_converged;
  }
  AugmentedState out = x;
  out.image() = nonneg ? Vec(r.x.cwiseMax(0.0)) : r.x;
  return out;
}

Agent make_sensor_agent(SensorModel model, double lambda_s, CgOptions cg, NonnegFlags nonneg) {
  model.validate();
  auto m = std::make_shared<const SensorModel>(std::move(model));
  return Agent("sensor", SliceTag::Both,
               [m, lambda_s, cg, nonneg](const AugmentedState& x) { return sensor_agent(x, *m, lambda_s, cg, nonneg); });
}

Agent make_explicit_data_agent(Vec v0_data, double lambda_d, bool nonneg_data) {
  auto v0 = std::make_shared<const Vec>(std::move(v0_data));
  return Agent("data-explicit", SliceTag::DataOnly, [v0, lambda_d, nonneg_data](const AugmentedState& x) {
    return explicit_data_agent(x, *v0, lambda_d, nonneg_data);
  });
}

Agent make_implicit_data_agent(Denoiser denoiser) {
  return Agent("data-implicit", SliceTag::DataOnly,
               [d = std::move(denoiser)](const AugmentedState& x) { return implicit_data_agent(x, d); });
}

Agent make_image_agent(Denoiser denoiser) {
  return Agent("image", SliceTag::ImageOnly,
               [d = std::move(denoiser)](const AugmentedState& x) { return image_agent(x, d); });
}

Agent make_tv_image_agent(double lambda_i, const Grid& grid, TvOptions options, bool nonneg,
                          std::shared_ptr<TvStats> stats) {
  return Agent("image", SliceTag::ImageOnly, [lambda_i, grid, options, nonneg, stats](const AugmentedState& x) {
    return tv_image_agent(x, lambda_i, grid, options, nonneg, stats.get());
  });
}

}  // namespace dipiir
