#include "oracles.hpp"

#include "dipiir/error.hpp"
#include "dipiir/metrics.hpp"
#include "dipiir/random.hpp"
#include "dipiir/simdata.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace dipiir;

namespace {

Vec randn(Index n, std::uint64_t seed) {
  const CounterRng rng(seed);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal(static_cast<std::uint64_t>(i));
  return v;
}

}  // namespace

TEST_SUITE("phantoms") {
  TEST_CASE("Shepp-Logan values") {
    const auto p = shepp_logan(128);
    CHECK(p.values.size() == 128 * 128);
    CHECK(p.values(0) == 0.0);
    CHECK(p.values.minCoeff() >= 0.0);
    CHECK(p.values.maxCoeff() <= 2.0);
    // pixel centres straddle the origin on an even grid; odd side has one on it
    const auto odd = shepp_logan(129);
    CHECK(std::abs(odd.values(64 * 129 + 64) - 1.02) < 1e-12);
    CHECK(std::abs(oracle::shepp_logan_at(0.0, 0.0) - 1.02) < 1e-12);
    CHECK_THROWS_AS(shepp_logan(15), ConfigError);
  }

  TEST_CASE("Shepp-Logan agrees with the independent table at every pixel") {
    const Index n = 64;
    const auto p = shepp_logan(n);
    Index disagree = 0;
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        const double x = -1.0 + (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(n);
        const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(n);
        if (std::abs(p.values(r * n + c) - oracle::shepp_logan_at(x, y)) > 1e-12) ++disagree;
      }
    CHECK(disagree == 0);
  }

  TEST_CASE("Shepp-Logan rasterization mirrors wherever the table does") {
    // The original table is not bilaterally symmetric: the two tilted inner
    // ellipses differ, as do the small ones at y = -0.605. Every pixel whose
    // analytic value matches its mirror must match in the raster too.
    const Index n = 128;
    const auto p = shepp_logan(n);
    Index asym_table = 0, asym_raster = 0, mismatched = 0;
    for (Index r = 0; r < n; ++r)
      for (Index c = 0; c < n; ++c) {
        const double x = -1.0 + (2.0 * static_cast<double>(c) + 1.0) / static_cast<double>(n);
        const double y = 1.0 - (2.0 * static_cast<double>(r) + 1.0) / static_cast<double>(n);
        const bool table = std::abs(oracle::shepp_logan_at(x, y) - oracle::shepp_logan_at(-x, y)) > 1e-12;
        const bool raster = std::abs(p.values(r * n + c) - p.values(r * n + (n - 1 - c))) > 1e-12;
        asym_table += table;
        asym_raster += raster;
        mismatched += table != raster;
      }
    CHECK(mismatched == 0);
    CHECK(asym_raster == asym_table);
    CHECK(asym_raster > 0);
  }

  TEST_CASE("centred disk") {
    const auto d = centered_disk(32, 0.25);
    CHECK(d.values(16 * 32 + 16) == 1.0);
    CHECK(d.values(0) == 0.0);
    CHECK(std::abs(d.values.sum() / (32.0 * 32.0) - M_PI * 0.0625) < 0.01);
  }
}

TEST_SUITE("acquisition") {
  TEST_CASE("limited angle sets") {
    const auto s = make_limited_angle_set(180, 0.5);
    CHECK(s.observed.size() == 90);
    CHECK(s.missing.size() == 90);
    CHECK(s.observed.front() == 0);
    CHECK(s.observed.back() == 89);
    CHECK(s.missing.front() == 90);
    CHECK(make_limited_angle_set(180, 179.0 / 180.0).missing.size() == 1);
    std::vector<Index> all = s.observed;
    all.insert(all.end(), s.missing.begin(), s.missing.end());
    std::sort(all.begin(), all.end());
    for (Index i = 0; i < 180; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);
    CHECK_THROWS_AS(make_limited_angle_set(180, 0.0), ConfigError);
    CHECK_THROWS_AS(make_limited_angle_set(180, 1.0), ConfigError);
    CHECK_THROWS_AS(make_limited_angle_set(180, 0.001), ConfigError);
  }

  TEST_CASE("k-space masks") {
    const auto full = make_kspace_mask(128, 1, 0.0);
    CHECK(full.sampled.size() == 128);
    CHECK(full.net_acceleration() == 1.0);
    const auto m4 = make_kspace_mask(128, 4, 0.0);
    CHECK(m4.sampled.size() == 32);
    CHECK(m4.net_acceleration() == 4.0);
    CHECK(m4.is_sampled(64));
    CHECK(m4.is_sampled(0));
    CHECK_FALSE(m4.is_sampled(1));

    // round-half-up(0.06 * 128) = 8 ACS columns [60, 68); 64 and 60 are on the grid
    const auto acs = make_kspace_mask(128, 4, 0.06);
    CHECK(acs.acs_begin == 60);
    CHECK(acs.acs_end == 68);
    CHECK(acs.sampled.size() == 32 + 6);
    CHECK(acs.missing().size() == 128 - 38);
    CHECK(std::is_sorted(acs.sampled.begin(), acs.sampled.end()));
    CHECK_NOTHROW(acs.validate());
    // the larger acquisition of the same regime
    const auto big = make_kspace_mask(320, 4, 0.06);
    CHECK(big.acs_end - big.acs_begin == 19);
    CHECK(big.net_acceleration() > 3.0);
    CHECK(big.net_acceleration() < 4.0);
    CHECK_THROWS_AS(make_kspace_mask(16, 0, 0.0), ConfigError);
    CHECK_THROWS_AS(make_kspace_mask(16, 4, 1.0), ConfigError);
  }

  TEST_CASE("noise") {
    const Vec v = randn(1000, 1);
    CHECK(add_gaussian_noise(v, 0.0, 7) == v);
    CHECK(add_gaussian_noise(v, 0.1, 7) == add_gaussian_noise(v, 0.1, 7));
    CHECK(add_gaussian_noise(v, 0.1, 7) != add_gaussian_noise(v, 0.1, 8));

    const Index n = 100000;
    const double sigma = 0.3;
    const Vec e = add_gaussian_noise(Vec::Zero(n), sigma, 42);
    const double mean = e.mean();
    const double var = (e.array() - mean).square().sum() / static_cast<double>(n - 1);
    CHECK(std::abs(var / (sigma * sigma) - 1.0) < 0.05);
    CHECK(std::abs(mean) < 0.01);
  }
}

TEST_SUITE("metrics") {
  const Grid g{24, 20};
  const Vec ref = (randn(480, 1).array().abs()).matrix();

  TEST_CASE("identical inputs") {
    CHECK(rmse(ref, ref) == 0.0);
    CHECK(nmse(ref, ref) == 0.0);
    CHECK(psnr(ref, ref, 1.0) == kPsnrCap);
    CHECK(std::abs(ssim(ref, ref, g) - 1.0) < 1e-12);
  }

  TEST_CASE("psnr arithmetic") {
    const Vec a = Vec::Zero(100);
    const Vec b = Vec::Constant(100, 0.1);  // mse 0.01
    CHECK(std::abs(psnr(a, b, 1.0) - 20.0) < 1e-12);
    CHECK(std::abs(rmse(a, b) - 0.1) < 1e-15);
  }

  TEST_CASE("ssim against the direct formula") {
    const Vec other = ref + 0.3 * randn(480, 2);
    CHECK(std::abs(ssim(other, ref, g) - oracle::naive_ssim(other, ref, 24, 20)) < 1e-8);
    const Vec far = randn(480, 3);
    CHECK(std::abs(ssim(far, ref, g) - oracle::naive_ssim(far, ref, 24, 20)) < 1e-8);
    const double s = ssim(far, ref, g);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }

  TEST_CASE("psnr falls as noise grows") {
    double last = kPsnrCap;
    for (double sigma : {0.01, 0.05, 0.1}) {
      const double p = psnr(add_gaussian_noise(ref, sigma, 5), ref, 1.0);
      CHECK(p < last);
      last = p;
    }
  }

  TEST_CASE("nmse is quadratic in the error") {
    const Vec e = randn(480, 4);
    CHECK(std::abs(nmse(ref + 2.5 * e, ref) - 6.25 * nmse(ref + e, ref)) < 1e-10);
    CHECK_THROWS_AS(nmse(ref, Vec::Zero(480)), NumericError);
    CHECK_THROWS_AS(rmse(ref, Vec::Zero(3)), ShapeError);
    CHECK_THROWS_AS(psnr(ref, ref, 0.0), ConfigError);
  }

  TEST_CASE("report uses the reference range as peak") {
    const auto r = compute_metrics(ref + 0.01 * randn(480, 6), ref, g);
    CHECK(r.peak == ref.maxCoeff() - ref.minCoeff());
    CHECK(r.window.window == 11);
    CHECK(std::abs(r.psnr - psnr(ref + 0.01 * randn(480, 6), ref, r.peak)) < 1e-12);
  }

  TEST_CASE("magnitude of a two-channel grid") {
    Vec z(4);
    z << 3, 0, 4, -2;
    const Vec m = magnitude(z);
    CHECK(m.size() == 2);
    CHECK(m(0) == 5.0);
    CHECK(m(1) == 2.0);
  }
}
