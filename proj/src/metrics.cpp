#include "tubal/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tubal {
namespace {

struct Layout {
  std::size_t h = 0, w = 0, bands = 0;
  std::size_t plane() const { return h * w; }
};

Layout layout_of(const DenseTensor& x) {
  const Shape& s = x.shape();
  require(!s.empty() && x.numel() > 0, Errc::invalid_argument, "metrics need a nonempty tensor");
  if (s.size() == 1) return {s[0], 1, 1};
  const std::size_t plane = s[0] * s[1];
  return {s[0], s[1], x.numel() / plane};
}

void require_same_shape(const DenseTensor& x, const DenseTensor& y) {
  require(x.shape() == y.shape(), Errc::shape_mismatch,
          "metric inputs differ in shape: " + shape_to_string(x.shape()) + " vs " + shape_to_string(y.shape()));
}

void require_image(const DenseTensor& x) {
  require(x.order() == 2, Errc::shape_mismatch, "expected a 2-D image, got " + shape_to_string(x.shape()));
}

double psnr_from_mse(double mse, double peak) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse);
}

DenseTensor band(const DenseTensor& x, const Layout& l, std::size_t b) {
  auto begin = x.data().begin() + static_cast<std::ptrdiff_t>(b * l.plane());
  return DenseTensor({l.h, l.w}, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(l.plane())));
}

struct WindowStats {
  double mx, my, vx, vy, cxy;
  bool identical;
};

WindowStats window_stats(const DenseTensor& x, const DenseTensor& y, std::size_t r0, std::size_t c0, std::size_t n) {
  const std::size_t h = x.dim(0);
  double sx = 0.0, sy = 0.0;
  bool identical = true;
  for (std::size_t c = c0; c < c0 + n; ++c)
    for (std::size_t r = r0; r < r0 + n; ++r) {
      const double a = x[r + c * h], b = y[r + c * h];
      sx += a;
      sy += b;
      identical = identical && a == b;
    }
  const double count = static_cast<double>(n * n);
  const double mx = sx / count, my = sy / count;
  double vx = 0.0, vy = 0.0, cxy = 0.0;
  for (std::size_t c = c0; c < c0 + n; ++c)
    for (std::size_t r = r0; r < r0 + n; ++r) {
      const double dx = x[r + c * h] - mx, dy = y[r + c * h] - my;
      vx += dx * dx;
      vy += dy * dy;
      cxy += dx * dy;
    }
  return {mx, my, vx / count, vy / count, cxy / count, identical};
}

void require_window(const DenseTensor& x, std::size_t window) {
  require(window >= 1, Errc::invalid_argument, "window size must be positive");
  require(window <= x.dim(0) && window <= x.dim(1), Errc::invalid_argument,
          "image " + shape_to_string(x.shape()) + " is smaller than the " + std::to_string(window) + "x" +
              std::to_string(window) + " window");
}

}  // namespace

MseResult mse_psnr(const DenseTensor& x, const DenseTensor& y, double peak) {
  require_same_shape(x, y);
  require(peak > 0.0, Errc::invalid_argument, "PSNR peak must be positive");
  require(x.numel() > 0, Errc::invalid_argument, "MSE of an empty tensor");
  const double d = difference_norm(x, y);
  const double mse = d * d / static_cast<double>(x.numel());
  return {mse, psnr_from_mse(mse, peak)};
}

double rmse(const DenseTensor& x, const DenseTensor& y) { return std::sqrt(mse_psnr(x, y).mse); }

double ssim(const DenseTensor& x, const DenseTensor& y, double dynamic_range, std::size_t window) {
  require_same_shape(x, y);
  require_image(x);
  require_window(x, window);
  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
  const std::size_t rows = x.dim(0) - window + 1, cols = x.dim(1) - window + 1;
  double total = 0.0;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) {
      const WindowStats s = window_stats(x, y, r, c, window);
      const double num = (2.0 * s.mx * s.my + c1) * (2.0 * s.cxy + c2);
      const double den = (s.mx * s.mx + s.my * s.my + c1) * (s.vx + s.vy + c2);
      total += num / den;
    }
  return total / static_cast<double>(rows * cols);
}

double ssim_mean(const DenseTensor& x, const DenseTensor& y, double dynamic_range, std::size_t window) {
  require_same_shape(x, y);
  const Layout l = layout_of(x);
  double total = 0.0;
  for (std::size_t b = 0; b < l.bands; ++b) total += ssim(band(x, l, b), band(y, l, b), dynamic_range, window);
  return total / static_cast<double>(l.bands);
}

WindowedIndex uiqi(const DenseTensor& x, const DenseTensor& y, std::size_t window) {
  require_same_shape(x, y);
  require_image(x);
  require_window(x, window);
  const std::size_t rows = x.dim(0) - window + 1, cols = x.dim(1) - window + 1;
  WindowedIndex out;
  double total = 0.0;
  for (std::size_t c = 0; c < cols; ++c)
    for (std::size_t r = 0; r < rows; ++r) {
      const WindowStats s = window_stats(x, y, r, c, window);
      double q;
      if (s.identical) {
        q = 1.0;
      } else if (s.vx == 0.0 || s.vy == 0.0) {
        ++out.skipped;
        continue;
      } else {
        const double sxy = std::sqrt(s.vx * s.vy);
        const double means = s.mx * s.mx + s.my * s.my;
        // Means at rounding level relative to the spread count as zero.
        const double luminance = means <= 1e-24 * (s.vx + s.vy) ? 1.0 : 2.0 * s.mx * s.my / means;
        q = (s.cxy / sxy) * luminance * (2.0 * sxy / (s.vx + s.vy));
        q = std::clamp(q, -1.0, 1.0);
      }
      total += q;
      ++out.windows;
    }
  out.value = out.windows ? total / static_cast<double>(out.windows) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

WindowedIndex uiqi_mean(const DenseTensor& x, const DenseTensor& y, std::size_t window) {
  require_same_shape(x, y);
  const Layout l = layout_of(x);
  WindowedIndex out;
  double total = 0.0;
  std::size_t contributing = 0;
  for (std::size_t b = 0; b < l.bands; ++b) {
    const WindowedIndex q = uiqi(band(x, l, b), band(y, l, b), window);
    out.windows += q.windows;
    out.skipped += q.skipped;
    if (q.windows) {
      total += q.value;
      ++contributing;
    }
  }
  out.value = contributing ? total / static_cast<double>(contributing) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

SamResult sam(const DenseTensor& x, const DenseTensor& y) {
  require_same_shape(x, y);
  const Layout l = layout_of(x);
  const std::size_t plane = l.plane();
  SamResult out;
  double total = 0.0;
  std::vector<double> a(l.bands), b(l.bands);
  for (std::size_t p = 0; p < plane; ++p) {
    double nx = 0.0, ny = 0.0;
    for (std::size_t k = 0; k < l.bands; ++k) {
      a[k] = x[p + k * plane];
      b[k] = y[p + k * plane];
      nx += a[k] * a[k];
      ny += b[k] * b[k];
    }
    if (nx == 0.0 || ny == 0.0) {
      ++out.skipped;
      continue;
    }
    nx = std::sqrt(nx);
    ny = std::sqrt(ny);
    // 2 atan2(|u - v|, |u + v|) on the unit vectors stays accurate near 0
    // and 180 degrees where acos of the cosine loses half the digits.
    double diff = 0.0, sum = 0.0;
    for (std::size_t k = 0; k < l.bands; ++k) {
      const double u = a[k] / nx, v = b[k] / ny;
      diff += (u - v) * (u - v);
      sum += (u + v) * (u + v);
    }
    total += 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
    ++out.pixels;
  }
  out.degrees = out.pixels ? total / static_cast<double>(out.pixels) * 180.0 / std::numbers::pi : 0.0;
  return out;
}

double ergas(const DenseTensor& x, const DenseTensor& y, double ratio) {
  require_same_shape(x, y);
  require(ratio > 0.0, Errc::invalid_argument, "ERGAS ratio must be positive");
  const Layout l = layout_of(x);
  const std::size_t plane = l.plane();
  std::vector<std::size_t> zero_bands;
  double acc = 0.0;
  for (std::size_t b = 0; b < l.bands; ++b) {
    double mean = 0.0, se = 0.0;
    for (std::size_t p = 0; p < plane; ++p) {
      const double v = x[p + b * plane];
      const double d = v - y[p + b * plane];
      mean += v;
      se += d * d;
    }
    mean /= static_cast<double>(plane);
    if (mean == 0.0) {
      zero_bands.push_back(b);
      continue;
    }
    acc += se / static_cast<double>(plane) / (mean * mean);
  }
  if (!zero_bands.empty()) {
    std::string list;
    for (std::size_t b : zero_bands) list += (list.empty() ? "" : ",") + std::to_string(b);
    fail(Errc::invalid_argument, "ERGAS undefined: reference band mean is zero in band(s) " + list);
  }
  return 100.0 * ratio * std::sqrt(acc / static_cast<double>(l.bands));
}

double data_max(const DenseTensor& x) {
  require(x.numel() > 0, Errc::invalid_argument, "maximum of an empty tensor");
  return *std::max_element(x.data().begin(), x.data().end());
}

MetricReport metric_report(const DenseTensor& x, const DenseTensor& y, const MetricOptions& o) {
  require_same_shape(x, y);
  require(o.ergas_ratio > 0.0, Errc::invalid_argument, "ERGAS ratio must be positive");
  const Layout l = layout_of(x);
  MetricReport r;
  const MseResult global = mse_psnr(x, y, o.peak);
  r.mse = global.mse;
  r.psnr_db = global.psnr_db;
  r.rmse = std::sqrt(global.mse);
  const double nx = frobenius_norm(x), d = difference_norm(x, y);
  r.rel_err = nx > 0.0 ? d / nx : (d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

  const bool windows_fit = l.h >= o.ssim_window && l.w >= o.ssim_window;
  const bool uiqi_fits = l.h >= o.uiqi_window && l.w >= o.uiqi_window;
  double ssim_total = 0.0, psnr_total = 0.0;
  for (std::size_t b = 0; b < l.bands; ++b) {
    const DenseTensor xb = band(x, l, b), yb = band(y, l, b);
    BandMetrics bm;
    const MseResult m = mse_psnr(xb, yb, o.peak);
    bm.mse = m.mse;
    bm.psnr_db = m.psnr_db;
    bm.rmse = std::sqrt(m.mse);
    psnr_total += m.psnr_db;
    if (windows_fit) {
      bm.ssim = ssim(xb, yb, o.peak, o.ssim_window);
      ssim_total += *bm.ssim;
    }
    if (uiqi_fits) {
      const WindowedIndex q = uiqi(xb, yb, o.uiqi_window);
      if (q.windows) bm.uiqi = q.value;
    }
    r.per_band.push_back(bm);
  }
  r.psnr_band_mean_db = psnr_total / static_cast<double>(l.bands);
  if (windows_fit) r.ssim = ssim_total / static_cast<double>(l.bands);
  if (uiqi_fits) {
    const WindowedIndex q = uiqi_mean(x, y, o.uiqi_window);
    r.uiqi_skipped = q.skipped;
    if (q.windows) r.uiqi = q.value;
  }

  try {
    r.ergas = ergas(x, y, o.ergas_ratio);
  } catch (const Error&) {
    const std::size_t plane = l.plane();
    for (std::size_t b = 0; b < l.bands; ++b) {
      double mean = 0.0;
      for (std::size_t p = 0; p < plane; ++p) mean += x[p + b * plane];
      if (mean == 0.0) r.ergas_zero_bands.push_back(b);
    }
  }

  const SamResult s = sam(x, y);
  r.sam_deg = s.degrees;
  r.sam_skipped = s.skipped;
  return r;
}

}  // namespace tubal
