#pragma once

// Thin RAII layer over FFTW. Plans are built once under a global lock and
// executed through the new-array interface, which FFTW allows concurrently.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace dipiir::detail {

struct FftwDeleter {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

FftwBuffer fftw_buffer(std::size_t n);

/// Unnormalized complex transform of fixed shape (1D when rows == 1).
class FftPlan {
 public:
  FftPlan(int rows, int cols, int sign);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// In-place on a buffer obtained from fftw_buffer(size()).
  void execute(fftw_complex* data) const;
  std::size_t size() const noexcept { return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_); }

 private:
  int rows_;
  int cols_;
  fftw_plan plan_ = nullptr;
};

}  // namespace dipiir::detail
