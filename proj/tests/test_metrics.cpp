#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tubal/metrics.hpp"

using namespace tubal;

namespace {

DenseTensor image(std::size_t h, std::size_t w, std::size_t b, std::mt19937_64& gen, double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  DenseTensor x(b == 1 ? Shape{h, w} : Shape{h, w, b});
  for (double& v : x.data()) v = d(gen);
  return x;
}

DenseTensor constant(const Shape& s, double c) {
  DenseTensor x(s);
  for (double& v : x.data()) v = c;
  return x;
}

}  // namespace

TEST_CASE("identical inputs give perfect scores exactly") {
  std::mt19937_64 gen(70);
  const DenseTensor x = image(16, 12, 3, gen);
  const MetricReport r = metric_report(x, x);
  CHECK(r.mse == 0.0);
  CHECK(r.rmse == 0.0);
  CHECK(std::isinf(r.psnr_db));
  CHECK(*r.ssim == 1.0);
  CHECK(*r.uiqi == 1.0);
  CHECK(*r.ergas == 0.0);
  CHECK(r.sam_deg == 0.0);
  CHECK(r.per_band.size() == 3);
}

TEST_CASE("MSE and PSNR closed forms") {
  const DenseTensor x = constant({4, 4}, 255.0), y = constant({4, 4}, 0.0);
  const MseResult r = mse_psnr(x, y, 255.0);
  CHECK(r.mse == 65025.0);
  CHECK(r.psnr_db == 0.0);
  const MseResult q = mse_psnr(constant({2, 2}, 10.0), constant({2, 2}, 0.0), 10.0);
  CHECK(q.psnr_db == 0.0);
  CHECK(mse_psnr(constant({2, 2}, 0.0), constant({2, 2}, 1.0), 255.0).psnr_db ==
        doctest::Approx(20.0 * std::log10(255.0)));
  CHECK_THROWS_AS(mse_psnr(x, constant({4, 5}, 0.0)), Error);
  CHECK_THROWS_AS(mse_psnr(x, y, 0.0), Error);
}

TEST_CASE("RMSE consistency") {
  std::mt19937_64 gen(71);
  const DenseTensor x = image(7, 9, 2, gen), y = image(7, 9, 2, gen);
  CHECK(std::abs(rmse(x, y) - std::sqrt(mse_psnr(x, y).mse)) < 1e-12);
  CHECK(rmse(x, x) == 0.0);
  DenseTensor z = x;
  for (double& v : z.data()) v -= 3.5;
  CHECK(rmse(x, z) == doctest::Approx(3.5).epsilon(1e-14));
  const MseResult m = mse_psnr(x, y);
  CHECK(std::abs(10.0 * std::log10(255.0 * 255.0 / (rmse(x, y) * rmse(x, y))) - m.psnr_db) < 1e-12);
}

TEST_CASE("SSIM per-window formula") {
  std::mt19937_64 gen(72);
  DenseTensor x = image(16, 16, 1, gen, -100.0, 100.0);
  double m = 0.0;
  for (double v : x.data()) m += v / 256.0;
  for (double& v : x.data()) v -= m;
  DenseTensor neg = x;
  for (double& v : neg.data()) v = -v;
  // One window spanning the zero-mean image: only the covariance term changes sign.
  CHECK(ssim(x, neg, 255.0, 16) < 0.0);

  // Single window with sigma = 0: (2 mx my + C1) C2 / ((mx^2 + my^2 + C1) C2).
  const double L = 255.0, c1 = (0.01 * L) * (0.01 * L);
  const double mx = 40.0, my = mx + L / 2;
  const double expect = (2 * mx * my + c1) / (mx * mx + my * my + c1);
  CHECK(ssim(constant({8, 8}, mx), constant({8, 8}, my), L, 8) == doctest::Approx(expect).epsilon(1e-14));
  CHECK_THROWS_AS(ssim(constant({4, 4}, 0), constant({4, 4}, 0), L, 8), Error);
}

TEST_CASE("SSIM against an independent loop over windows") {
  std::mt19937_64 gen(73);
  const DenseTensor x = image(11, 10, 1, gen), y = image(11, 10, 1, gen);
  const std::size_t w = 4;
  const double c1 = std::pow(0.01 * 255, 2), c2 = std::pow(0.03 * 255, 2);
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r + w <= 11; ++r)
    for (std::size_t c = 0; c + w <= 10; ++c) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < w; ++i)
        for (std::size_t j = 0; j < w; ++j) {
          a.push_back(x({r + i, c + j}));
          b.push_back(y({r + i, c + j}));
        }
      double ma = 0, mb = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k] / a.size();
        mb += b[k] / b.size();
      }
      double va = 0, vb = 0, cab = 0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        va += (a[k] - ma) * (a[k] - ma) / a.size();
        vb += (b[k] - mb) * (b[k] - mb) / a.size();
        cab += (a[k] - ma) * (b[k] - mb) / a.size();
      }
      total += (2 * ma * mb + c1) * (2 * cab + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  CHECK(ssim(x, y, 255.0, w) == doctest::Approx(total / count).epsilon(1e-12));
}

TEST_CASE("UIQI closed forms") {
  std::mt19937_64 gen(74);
  DenseTensor x = image(8, 8, 1, gen, -1.0, 1.0);
  double mean = 0.0;
  for (double v : x.data()) mean += v / 64.0;
  for (double& v : x.data()) v -= mean;
  DenseTensor neg = x;
  for (double& v : neg.data()) v = -v;
  CHECK(uiqi(x, neg, 8).value == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(uiqi(x, x, 8).value == 1.0);

  // y = x + c: sigma_xy = sigma_x^2, so Q = 2 mx my / (mx^2 + my^2).
  DenseTensor base = image(8, 8, 1, gen, 10.0, 20.0);
  double mx = 0.0;
  for (double v : base.data()) mx += v / 64.0;
  DenseTensor shifted = base;
  for (double& v : shifted.data()) v += 5.0;
  const double my = mx + 5.0;
  CHECK(uiqi(base, shifted, 8).value == doctest::Approx(2 * mx * my / (mx * mx + my * my)).epsilon(1e-12));

  // Flat windows: identical ones count as 1, others are skipped.
  const WindowedIndex flat = uiqi(constant({8, 8}, 3.0), constant({8, 8}, 3.0), 4);
  CHECK(flat.value == 1.0);
  CHECK(flat.skipped == 0);
  const WindowedIndex skip = uiqi(constant({8, 8}, 3.0), base, 4);
  CHECK(skip.skipped == 25);
  CHECK(skip.windows == 0);
}

TEST_CASE("SAM") {
  std::mt19937_64 gen(75);
  const DenseTensor x = image(5, 6, 4, gen, 1.0, 2.0), y = image(5, 6, 4, gen, 1.0, 2.0);
  DenseTensor x2 = x;
  for (double& v : x2.data()) v *= 2.0;
  CHECK(sam(x, x2).degrees == 0.0);
  DenseTensor y3 = y;
  for (double& v : y3.data()) v *= 3.7;
  CHECK(std::abs(sam(x, y3).degrees - sam(x, y).degrees) < 1e-12);

  // Orthogonal spectra everywhere.
  DenseTensor a({2, 2, 2}), b({2, 2, 2});
  for (std::size_t p = 0; p < 4; ++p) {
    a[p] = 1.0;
    b[p + 4] = 2.0;
  }
  CHECK(sam(a, b).degrees == doctest::Approx(90.0).epsilon(1e-14));
  DenseTensor z = a;
  z[0] = 0.0;
  const SamResult s = sam(z, b);
  CHECK(s.skipped == 1);
  CHECK(s.pixels == 3);

  // Oracle: mean of acos over pixels.
  double total = 0.0;
  for (std::size_t p = 0; p < 30; ++p) {
    double d = 0, nx = 0, ny = 0;
    for (std::size_t k = 0; k < 4; ++k) {
      d += x[p + 30 * k] * y[p + 30 * k];
      nx += x[p + 30 * k] * x[p + 30 * k];
      ny += y[p + 30 * k] * y[p + 30 * k];
    }
    total += std::acos(d / std::sqrt(nx * ny));
  }
  CHECK(sam(x, y).degrees == doctest::Approx(total / 30 * 180 / std::numbers::pi).epsilon(1e-10));
}

TEST_CASE("ERGAS") {
  const DenseTensor x = constant({4, 4}, 50.0);
  const DenseTensor y = constant({4, 4}, 53.0);
  CHECK(ergas(x, y) == doctest::Approx(100.0 * 3.0 / 50.0).epsilon(1e-14));
  CHECK(ergas(x, y, 0.25) == doctest::Approx(25.0 * 3.0 / 50.0).epsilon(1e-14));
  DenseTensor bands({2, 2, 3});
  for (std::size_t i = 0; i < 4; ++i) bands[i + 8] = 1.0;
  try {
    ergas(bands, bands);
    FAIL("zero band mean accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("0,1") != std::string::npos);
  }
  const MetricReport r = metric_report(bands, bands, {255.0, 2, 2, 1.0});
  CHECK_FALSE(r.ergas.has_value());
  CHECK(r.ergas_zero_bands == std::vector<std::size_t>{0, 1});
}

TEST_CASE("band-averaged PSNR") {
  DenseTensor x({4, 4, 2}), y({4, 4, 2});
  for (std::size_t i = 0; i < 16; ++i) {
    x[i] = 10.0;
    y[i] = 11.0;
    x[i + 16] = 10.0;
    y[i + 16] = 13.0;
  }
  const MetricReport r = metric_report(x, y, {20.0, 2, 2, 1.0});
  const double p1 = 10.0 * std::log10(400.0 / 1.0), p2 = 10.0 * std::log10(400.0 / 9.0);
  CHECK(r.psnr_band_mean_db == doctest::Approx((p1 + p2) / 2).epsilon(1e-14));
  CHECK(r.psnr_db == doctest::Approx(10.0 * std::log10(400.0 / 5.0)).epsilon(1e-14));
  CHECK(std::isinf(metric_report(x, x).psnr_band_mean_db));
}

TEST_CASE("small images omit windowed metrics in the report") {
  const DenseTensor x = constant({3, 3}, 1.0);
  const MetricReport r = metric_report(x, x);
  CHECK_FALSE(r.ssim.has_value());
  CHECK_FALSE(r.uiqi.has_value());
  CHECK(r.mse == 0.0);
}
