#include "dipiir/agents.hpp"
#include "dipiir/cg.hpp"
#include "dipiir/completion.hpp"
#include "dipiir/consensus.hpp"
#include "dipiir/radon.hpp"
#include "dipiir/simdata.hpp"

#include <benchmark/benchmark.h>

using namespace dipiir;

namespace {

// Limited-angle CT at 64^2: sensor, explicit data prior and TV image prior.
struct CtFixture {
  CTGeometry full = CTGeometry::uniform(64, 90);
  AngleSplit split = make_limited_angle_set(90, 0.5);
  SensorModel sensor;
  Vec v0;
  AugmentedState x0;

  CtFixture() {
    const Vec y = radon_apply(shepp_logan(64).values, full);
    const auto obs = full.subset(split.observed);
    const auto miss = full.subset(split.missing);
    const Vec y_obs = y.head(obs.sinogram_len());
    sensor = make_incomplete_sensor_model(y_obs, make_incomplete_op(make_radon_op(obs), make_radon_op(miss)));
    v0 = sinogram_complete(y_obs, full, obs.num_angles());
    Vec pad = Vec::Zero(full.sinogram_len());
    pad.head(y_obs.size()) = y_obs;
    const Vec img = fbp(pad, full);
    x0 = AugmentedState(img, radon_apply(img, miss));
  }
};

const CtFixture& fixture() {
  static const CtFixture f;
  return f;
}

void BM_SensorCg(benchmark::State& st) {
  const auto& f = fixture();
  const CgOptions cg{static_cast<int>(st.range(0)), 0.0};
  for (auto _ : st) benchmark::DoNotOptimize(sensor_agent(f.x0, f.sensor, 0.05, cg));
}
BENCHMARK(BM_SensorCg)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MannStep(benchmark::State& st) {
  const auto& f = fixture();
  AgentSet agents;
  agents.sensor = make_sensor_agent(f.sensor, 0.05);
  agents.data = make_explicit_data_agent(f.v0, 2.0);
  agents.image = make_tv_image_agent(1.0, Grid{64, 64});
  CEParams p;
  p.mu = {0.6, 0.2, 0.2};
  p.concurrent_agents = st.range(0) != 0;
  const CEConfig cfg(p);
  const auto s = StackedState::replicate(f.x0);
  for (auto _ : st) benchmark::DoNotOptimize(mann_step(s, agents, cfg));
}
BENCHMARK(BM_MannStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
