#include "fft.hpp"

#include <mutex>
#include <new>

namespace dipiir::detail {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

FftwBuffer fftw_buffer(std::size_t n) {
  auto* p = fftw_alloc_complex(n == 0 ? 1 : n);
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer(p);
}

FftPlan::FftPlan(int rows, int cols, int sign) : rows_(rows), cols_(cols) {
  auto scratch = fftw_buffer(size());
  std::lock_guard lock(planner_mutex());
  if (rows == 1)
    plan_ = fftw_plan_dft_1d(cols, scratch.get(), scratch.get(), sign, FFTW_ESTIMATE);
  else
    plan_ = fftw_plan_dft_2d(rows, cols, scratch.get(), scratch.get(), sign, FFTW_ESTIMATE);
  if (plan_ == nullptr) throw std::bad_alloc();
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan_);
}

void FftPlan::execute(fftw_complex* data) const { fftw_execute_dft(plan_, data, data); }

}  // namespace dipiir::detail
