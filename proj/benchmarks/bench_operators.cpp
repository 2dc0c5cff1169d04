#include "dipiir/convolution.hpp"
#include "dipiir/denoiser.hpp"
#include "dipiir/fourier.hpp"
#include "dipiir/radon.hpp"
#include "dipiir/random.hpp"
#include "dipiir/simdata.hpp"

#include <benchmark/benchmark.h>

using namespace dipiir;

namespace {

Vec randn(Index n) {
  const CounterRng rng(1);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal(static_cast<std::uint64_t>(i));
  return v;
}

void BM_RadonApply(benchmark::State& st) {
  const auto g = CTGeometry::uniform(st.range(0), 180);
  const Vec x = shepp_logan(st.range(0)).values;
  for (auto _ : st) benchmark::DoNotOptimize(radon_apply(x, g));
}
BENCHMARK(BM_RadonApply)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_RadonAdjoint(benchmark::State& st) {
  const auto g = CTGeometry::uniform(st.range(0), 180);
  const Vec y = randn(g.sinogram_len());
  for (auto _ : st) benchmark::DoNotOptimize(radon_adjoint(y, g));
}
BENCHMARK(BM_RadonAdjoint)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Fbp(benchmark::State& st) {
  const auto g = CTGeometry::uniform(128, 180);
  const Vec y = radon_apply(shepp_logan(128).values, g);
  for (auto _ : st) benchmark::DoNotOptimize(fbp(y, g));
}
BENCHMARK(BM_Fbp)->Unit(benchmark::kMillisecond);

void BM_Dft2(benchmark::State& st) {
  const Index n = st.range(0);
  const auto mask = make_kspace_mask(n, 4, 0.06);
  const Vec x = randn(2 * n * n);
  for (auto _ : st) benchmark::DoNotOptimize(dft2_apply(x, &mask));
}
BENCHMARK(BM_Dft2)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_Blur(benchmark::State& st) {
  const auto op = make_blur_op(gaussian_kernel(1.0), 128);
  const Vec x = randn(128 * 128);
  for (auto _ : st) benchmark::DoNotOptimize(op.apply(x));
}
BENCHMARK(BM_Blur)->Unit(benchmark::kMicrosecond);

void BM_TvDenoise(benchmark::State& st) {
  const Vec x = shepp_logan(128).values + 0.05 * randn(128 * 128);
  const Grid g{128, 128};
  for (auto _ : st) benchmark::DoNotOptimize(tv_denoise(x, g, 0.1));
}
BENCHMARK(BM_TvDenoise)->Unit(benchmark::kMillisecond);

}  // namespace
