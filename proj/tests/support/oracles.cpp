#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

const std::vector<Ellipse>& shepp_logan_table() {
  static const std::vector<Ellipse> t{
      {2.00, 0.69, 0.92, 0.0, 0.0, 0.0},       {-0.98, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
      {-0.02, 0.11, 0.31, 0.22, 0.0, -18.0},   {-0.02, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.01, 0.21, 0.25, 0.0, 0.35, 0.0},      {0.01, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.01, 0.046, 0.046, 0.0, -0.1, 0.0},    {0.01, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.01, 0.023, 0.023, 0.0, -0.606, 0.0},  {0.01, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  return t;
}

double shepp_logan_at(double x, double y) {
  double v = 0.0;
  for (const auto& e : shepp_logan_table()) {
    const double p = e.phi_deg * M_PI / 180.0;
    const double dx = x - e.x0, dy = y - e.y0;
    const double u = dx * std::cos(p) + dy * std::sin(p);
    const double w = -dx * std::sin(p) + dy * std::cos(p);
    if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
  }
  return v;
}

double shepp_logan_line_integral(double theta, double s, double fov) {
  // Work in phantom units: s scales by 2 / fov, lengths scale back by fov / 2.
  const double scale = 2.0 / fov;
  const double sp = s * scale;
  double total = 0.0;
  for (const auto& e : shepp_logan_table()) {
    const double p = e.phi_deg * M_PI / 180.0;
    const double t = theta - p;
    const double s0 = sp - (e.x0 * std::cos(theta) + e.y0 * std::sin(theta));
    const double a2 = e.a * e.a * std::cos(t) * std::cos(t) + e.b * e.b * std::sin(t) * std::sin(t);
    if (s0 * s0 < a2) total += e.intensity * 2.0 * e.a * e.b * std::sqrt(a2 - s0 * s0) / a2;
  }
  return total / scale;
}

double sampled_line_integral(const std::function<double(double, double)>& f, double theta, double s,
                             double half_len, double step) {
  const double c = std::cos(theta), sn = std::sin(theta);
  const int n = static_cast<int>(std::ceil(2.0 * half_len / step));
  const double h = 2.0 * half_len / n;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double tau = -half_len + (k + 0.5) * h;
    acc += f(s * c - tau * sn, s * sn + tau * c);
  }
  return acc * h;
}

double naive_ssim(const Vec& a, const Vec& b, int rows, int cols) {
  const int win = 11, r = 5;
  const double sigma = 1.5;
  const double range = b.maxCoeff() - b.minCoeff();
  const double c1 = std::pow(0.01 * range, 2), c2 = std::pow(0.03 * range, 2);
  double sum = 0.0;
  int count = 0;
  for (int i = r; i + r < rows; ++i) {
    for (int j = r; j + r < cols; ++j) {
      double wsum = 0, ma = 0, mb = 0;
      for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          const double w = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
          wsum += w;
          ma += w * a((i + di) * cols + j + dj);
          mb += w * b((i + di) * cols + j + dj);
        }
      ma /= wsum;
      mb /= wsum;
      double va = 0, vb = 0, cov = 0;
      for (int di = -r; di <= r; ++di)
        for (int dj = -r; dj <= r; ++dj) {
          const double w = std::exp(-(di * di + dj * dj) / (2 * sigma * sigma));
          const double xa = a((i + di) * cols + j + dj) - ma;
          const double xb = b((i + di) * cols + j + dj) - mb;
          va += w * xa * xa;
          vb += w * xb * xb;
          cov += w * xa * xb;
        }
      va /= wsum;
      vb /= wsum;
      cov /= wsum;
      sum += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  (void)win;
  return sum / count;
}

Vec tv1d_dual_qp(const Vec& f, double alpha, int iters) {
  // u = f - D^T z, D the forward difference; minimize 0.5|f - D^T z|^2 over the box.
  const int n = static_cast<int>(f.size());
  Vec z = Vec::Zero(n - 1);
  auto dt = [&](const Vec& zz) {
    Vec out = Vec::Zero(n);
    for (int k = 0; k + 1 < n; ++k) {
      out(k) -= zz(k);
      out(k + 1) += zz(k);
    }
    return out;
  };
  const double step = 0.25;  // 1 / |D|^2 bound
  for (int it = 0; it < iters; ++it) {
    const Vec u = f - dt(z);
    for (int k = 0; k + 1 < n; ++k) z(k) = std::clamp(z(k) + step * (u(k + 1) - u(k)), -alpha, alpha);
  }
  return f - dt(z);
}

Mat dense_blur(const Mat& kernel, int side) {
  const int n = side * side;
  const int rr = static_cast<int>(kernel.rows()) / 2, rc = static_cast<int>(kernel.cols()) / 2;
  auto refl = [](int i, int m) {
    while (i < 0 || i >= m) i = i < 0 ? -i - 1 : 2 * m - i - 1;
    return i;
  };
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      for (int a = -rr; a <= rr; ++a)
        for (int b = -rc; b <= rc; ++b)
          A(i * side + j, refl(i - a, side) * side + refl(j - b, side)) += kernel(a + rr, b + rc);
  return A;
}

}  // namespace oracle
