#include "dipiir/radon.hpp"

#include "dipiir/error.hpp"
#include "fft.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

namespace dipiir {

void CTGeometry::validate() const {
  if (image_side < 1) throw ConfigError("CTGeometry: image_side must be >= 1");
  if (!(pixel_size > 0.0)) throw ConfigError("CTGeometry: pixel_size must be positive");
  if (angles.empty()) throw ConfigError("CTGeometry: at least one angle is required");
  for (std::size_t a = 0; a < angles.size(); ++a) {
    if (!(angles[a] >= 0.0 && angles[a] < std::numbers::pi))
      throw ConfigError("CTGeometry: angle " + std::to_string(a) + " outside [0, pi)");
    if (a > 0 && !(angles[a] > angles[a - 1]))
      throw ConfigError("CTGeometry: angles must be strictly increasing");
  }
  if (num_detectors < image_side)
    throw ConfigError("CTGeometry: num_detectors must be >= image_side");
  if (!(detector_spacing > 0.0)) throw ConfigError("CTGeometry: detector_spacing must be positive");
}

CTGeometry CTGeometry::subset(const std::vector<Index>& angle_indices) const {
  CTGeometry out = *this;
  out.angles.clear();
  for (Index a : angle_indices) {
    if (a < 0 || a >= num_angles()) throw ShapeError("CTGeometry::subset: angle index out of range");
    out.angles.push_back(angles[static_cast<std::size_t>(a)]);
  }
  return out;
}

Index default_detector_count(Index image_side) {
  auto n = static_cast<Index>(std::ceil(static_cast<double>(image_side) * std::numbers::sqrt2));
  return n % 2 == 0 ? n + 1 : n;
}

CTGeometry CTGeometry::uniform(Index image_side, Index num_angles) {
  if (image_side < 1 || num_angles < 1) throw ConfigError("CTGeometry::uniform: sizes must be >= 1");
  CTGeometry g;
  g.image_side = image_side;
  g.pixel_size = 1.0 / static_cast<double>(image_side);
  g.angles.resize(static_cast<std::size_t>(num_angles));
  for (Index a = 0; a < num_angles; ++a)
    g.angles[static_cast<std::size_t>(a)] = std::numbers::pi * static_cast<double>(a) / static_cast<double>(num_angles);
  g.num_detectors = default_detector_count(image_side);
  g.detector_spacing = g.pixel_size;
  return g;
}

namespace {

// Visits every (image index, weight) pair of one ray. The ray is stepped
// along whichever image axis it crosses fastest and sampled with linear
// interpolation across the other axis.
template <typename Visit>
void trace_ray(const CTGeometry& g, double sin_t, double cos_t, double t, Visit&& visit) {
  const Index n = g.image_side;
  const double p = g.pixel_size;
  const double ctr = 0.5 * static_cast<double>(n - 1);
  if (std::abs(sin_t) >= std::abs(cos_t)) {
    // Column stepping: row coordinate r(j) = r0 + j * dr.
    const double w = p / std::abs(sin_t);
    const double dr = cos_t / sin_t;
    const double r0 = ctr - t / (p * sin_t) - ctr * dr;
    for (Index j = 0; j < n; ++j) {
      const double r = r0 + static_cast<double>(j) * dr;
      const double fl = std::floor(r);
      if (fl < -1.0 || fl > static_cast<double>(n - 1)) continue;
      const auto i0 = static_cast<Index>(fl);
      const double f = r - fl;
      if (i0 >= 0) visit(i0 * n + j, w * (1.0 - f));
      if (i0 + 1 < n) visit((i0 + 1) * n + j, w * f);
    }
  } else {
    // Row stepping: column coordinate q(i) = q0 + i * dq.
    const double w = p / std::abs(cos_t);
    const double dq = sin_t / cos_t;
    const double q0 = t / (p * cos_t) - ctr * dq + ctr;
    for (Index i = 0; i < n; ++i) {
      const double q = q0 + static_cast<double>(i) * dq;
      const double fl = std::floor(q);
      if (fl < -1.0 || fl > static_cast<double>(n - 1)) continue;
      const auto j0 = static_cast<Index>(fl);
      const double f = q - fl;
      if (j0 >= 0) visit(i * n + j0, w * (1.0 - f));
      if (j0 + 1 < n) visit(i * n + j0 + 1, w * f);
    }
  }
}

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw NumericError(std::string(what) + ": non-finite input");
}

}  // namespace

Vec radon_apply(const Vec& image, const CTGeometry& geom) {
  if (image.size() != geom.image_len())
    throw ShapeError("radon_apply: image length " + std::to_string(image.size()) + " != " +
                     std::to_string(geom.image_len()));
  require_finite(image, "radon_apply");
  Vec sino = Vec::Zero(geom.sinogram_len());
  for (Index a = 0; a < geom.num_angles(); ++a) {
    const double theta = geom.angles[static_cast<std::size_t>(a)];
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (Index k = 0; k < geom.num_detectors; ++k) {
      double acc = 0.0;
      trace_ray(geom, s, c, geom.detector_offset(k), [&](Index idx, double w) { acc += w * image[idx]; });
      sino[a * geom.num_detectors + k] = acc;
    }
  }
  return sino;
}

Vec radon_adjoint(const Vec& sinogram, const CTGeometry& geom) {
  if (sinogram.size() != geom.sinogram_len())
    throw ShapeError("radon_adjoint: sinogram length " + std::to_string(sinogram.size()) + " != " +
                     std::to_string(geom.sinogram_len()));
  require_finite(sinogram, "radon_adjoint");
  Vec image = Vec::Zero(geom.image_len());
  for (Index a = 0; a < geom.num_angles(); ++a) {
    const double theta = geom.angles[static_cast<std::size_t>(a)];
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    for (Index k = 0; k < geom.num_detectors; ++k) {
      const double val = sinogram[a * geom.num_detectors + k];
      if (val == 0.0) continue;
      trace_ray(geom, s, c, geom.detector_offset(k), [&](Index idx, double w) { image[idx] += w * val; });
    }
  }
  return image;
}

LinearOp make_radon_op(const CTGeometry& geom) {
  geom.validate();
  auto g = std::make_shared<const CTGeometry>(geom);
  return LinearOp(
      g->image_len(), g->sinogram_len(), [g](const Vec& u) { return radon_apply(u, *g); },
      [g](const Vec& v) { return radon_adjoint(v, *g); }, "radon");
}

FilterKind parse_filter(const std::string& name) {
  if (name == "ram-lak" || name == "ramlak" || name == "ram_lak") return FilterKind::RamLak;
  throw ConfigError("fbp: unsupported filter '" + name + "'");
}

namespace {

// Ram-Lak filtering by circular convolution with the band-limited spatial
// ramp kernel, zero padded so no wrap-around reaches the detector window.
Vec ramp_filter(const Vec& sinogram, const CTGeometry& geom) {
  const Index nd = geom.num_detectors;
  const double tau = geom.detector_spacing;
  Index len = 1;
  while (len < 2 * nd) len *= 2;
  const auto L = static_cast<std::size_t>(len);

  const detail::FftPlan forward(1, static_cast<int>(len), FFTW_FORWARD);
  const detail::FftPlan backward(1, static_cast<int>(len), FFTW_BACKWARD);

  auto kernel = detail::fftw_buffer(L);
  for (std::size_t i = 0; i < L; ++i) kernel[i][0] = kernel[i][1] = 0.0;
  kernel[0][0] = 1.0 / (4.0 * tau * tau);
  for (Index k = 1; k < nd; k += 2) {
    const double v = -1.0 / (std::numbers::pi * std::numbers::pi * static_cast<double>(k * k) * tau * tau);
    kernel[static_cast<std::size_t>(k)][0] = v;
    kernel[L - static_cast<std::size_t>(k)][0] = v;
  }
  forward.execute(kernel.get());

  Vec out(sinogram.size());
  auto buf = detail::fftw_buffer(L);
  for (Index a = 0; a < geom.num_angles(); ++a) {
    for (std::size_t i = 0; i < L; ++i) buf[i][0] = buf[i][1] = 0.0;
    for (Index k = 0; k < nd; ++k) buf[static_cast<std::size_t>(k)][0] = sinogram[a * nd + k];
    forward.execute(buf.get());
    for (std::size_t i = 0; i < L; ++i) {
      const std::complex<double> z(buf[i][0], buf[i][1]);
      const std::complex<double> h(kernel[i][0], kernel[i][1]);
      const auto prod = z * h;
      buf[i][0] = prod.real();
      buf[i][1] = prod.imag();
    }
    backward.execute(buf.get());
    for (Index k = 0; k < nd; ++k)
      out[a * nd + k] = tau * buf[static_cast<std::size_t>(k)][0] / static_cast<double>(len);
  }
  return out;
}

}  // namespace

Vec fbp(const Vec& sinogram, const CTGeometry& geom, FilterKind filter) {
  geom.validate();
  if (sinogram.size() != geom.sinogram_len())
    throw ShapeError("fbp: sinogram length " + std::to_string(sinogram.size()) + " != " +
                     std::to_string(geom.sinogram_len()));
  require_finite(sinogram, "fbp");
  (void)filter;  // RamLak is the only kind
  const Vec q = ramp_filter(sinogram, geom);

  const Index n = geom.image_side;
  const Index nd = geom.num_detectors;
  const double p = geom.pixel_size;
  const double ctr = 0.5 * static_cast<double>(n - 1);
  const double det_ctr = 0.5 * static_cast<double>(nd - 1);
  Vec image = Vec::Zero(geom.image_len());
  for (Index a = 0; a < geom.num_angles(); ++a) {
    const double theta = geom.angles[static_cast<std::size_t>(a)];
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double* row = q.data() + a * nd;
    for (Index i = 0; i < n; ++i) {
      const double y = (ctr - static_cast<double>(i)) * p;
      for (Index j = 0; j < n; ++j) {
        const double x = (static_cast<double>(j) - ctr) * p;
        const double u = (x * c + y * s) / geom.detector_spacing + det_ctr;
        const double fl = std::floor(u);
        const auto k0 = static_cast<Index>(fl);
        const double f = u - fl;
        double v = 0.0;
        if (k0 >= 0 && k0 < nd) v += (1.0 - f) * row[k0];
        if (k0 + 1 >= 0 && k0 + 1 < nd) v += f * row[k0 + 1];
        image[i * n + j] += v;
      }
    }
  }
  image *= std::numbers::pi / static_cast<double>(geom.num_angles());
  return image;
}

}  // namespace dipiir
