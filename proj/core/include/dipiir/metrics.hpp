#pragma once

#include "dipiir/grid.hpp"
#include "dipiir/linear_op.hpp"

namespace dipiir {

inline constexpr double kPsnrCap = 300.0;

double rmse(const Vec& a, const Vec& b);
/// 10 log10(peak^2 / mse), capped at kPsnrCap when mse is 0.
double psnr(const Vec& a, const Vec& b, double peak);
/// |a - b|^2 / |b|^2 with b the reference.
double nmse(const Vec& a, const Vec& b);

struct SsimOptions {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over every window position fully inside the image, Gaussian
/// weighted. Dynamic range is max(b) - min(b) of the reference.
double ssim(const Vec& a, const Vec& b, const Grid& grid, const SsimOptions& options = {});

struct MetricsReport {
  double rmse = 0.0;
  double psnr = 0.0;
  double ssim = 0.0;
  double nmse = 0.0;
  double peak = 0.0;
  SsimOptions window;
};

/// All four metrics with peak = dynamic range of the reference.
MetricsReport compute_metrics(const Vec& recon, const Vec& reference, const Grid& grid);

/// Magnitude image of a two-channel (real, imaginary) grid.
Vec magnitude(const Vec& two_channel);

}  // namespace dipiir
