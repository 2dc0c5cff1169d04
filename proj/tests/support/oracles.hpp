#pragma once

// Independent reference computations used to derive the frozen test values.
// Nothing here shares code with the library beyond the Eigen types.

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Ellipse {
  double intensity, a, b, x0, y0, phi_deg;
};

/// Kak & Slaney table of the original head phantom on [-1, 1]^2.
const std::vector<Ellipse>& shepp_logan_table();

/// Analytic phantom value at (x, y) in [-1, 1]^2.
double shepp_logan_at(double x, double y);

/// Exact line integral of the phantom along {x cos t + y sin t = s}, with the
/// phantom's [-1, 1]^2 support scaled into a field of view of width `fov`.
double shepp_logan_line_integral(double theta, double s, double fov);

/// Line integral of f along {x cos t + y sin t = s} by midpoint sampling at
/// `step` over |tau| <= half_len.
double sampled_line_integral(const std::function<double(double, double)>& f, double theta, double s,
                             double half_len, double step);

/// Straightforward per-window SSIM (two-pass means and moments, unnormalized
/// weights) over valid 11x11 windows, sigma 1.5, range of b.
double naive_ssim(const Vec& a, const Vec& b, int rows, int cols);

/// 1D TV prox argmin_u 0.5|u - f|^2 + alpha * sum |u_{k+1} - u_k| by projected
/// gradient on the dual box |z_k| <= alpha.
Vec tv1d_dual_qp(const Vec& f, double alpha, int iters = 200000);

/// Dense 2D convolution matrix with symmetric-reflect boundary.
Mat dense_blur(const Mat& kernel, int side);

}  // namespace oracle
