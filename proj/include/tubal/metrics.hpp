#pragma once

#include <optional>
#include <vector>

#include "tubal/tensor.hpp"

namespace tubal {

// Images are H x W (one band) or H x W x B with bands on the last mode.
// Higher orders are viewed as I_1 x I_2 x (I_3 ... I_N).

struct MseResult {
  double mse = 0.0;
  double psnr_db = 0.0;  ///< +infinity when mse == 0
};

MseResult mse_psnr(const DenseTensor& x, const DenseTensor& y, double peak = 255.0);
double rmse(const DenseTensor& x, const DenseTensor& y);

/// Windowed SSIM of one 2-D image pair, averaged over all window positions.
double ssim(const DenseTensor& x, const DenseTensor& y, double dynamic_range = 255.0, std::size_t window = 8);
/// Band-averaged SSIM.
double ssim_mean(const DenseTensor& x, const DenseTensor& y, double dynamic_range = 255.0, std::size_t window = 8);

struct WindowedIndex {
  double value = 0.0;
  std::size_t windows = 0;  ///< windows that contributed
  std::size_t skipped = 0;  ///< degenerate windows left out
};

/// Universal image quality index of one 2-D image pair.
///
/// Evaluated as correlation * luminance * contrast. Windows where the two
/// images agree exactly count as 1. Windows where either image is flat are
/// skipped. When both window means are zero (to rounding, relative to the
/// variances) the luminance factor is taken as 1.
WindowedIndex uiqi(const DenseTensor& x, const DenseTensor& y, std::size_t window = 8);
WindowedIndex uiqi_mean(const DenseTensor& x, const DenseTensor& y, std::size_t window = 8);

struct SamResult {
  double degrees = 0.0;
  std::size_t pixels = 0;
  std::size_t skipped = 0;  ///< pixels with a zero spectrum in x or y
};

/// Mean spectral angle over pixels; spectra run along the band mode.
SamResult sam(const DenseTensor& x, const DenseTensor& y);

/// 100 * ratio * sqrt(mean_b (RMSE_b / mu_b)^2), mu_b the reference band
/// mean. Throws invalid_argument naming every band with a zero mean.
double ergas(const DenseTensor& x, const DenseTensor& y, double ratio = 1.0);

struct MetricOptions {
  double peak = 255.0;
  std::size_t ssim_window = 8;
  std::size_t uiqi_window = 8;
  double ergas_ratio = 1.0;
};

struct BandMetrics {
  double mse = 0.0;
  double psnr_db = 0.0;
  double rmse = 0.0;
  std::optional<double> ssim;
  std::optional<double> uiqi;
};

struct MetricReport {
  double mse = 0.0;
  double psnr_db = 0.0;
  /// Mean of the per-band PSNRs; +infinity if any band is exact.
  double psnr_band_mean_db = 0.0;
  double rmse = 0.0;
  double rel_err = 0.0;
  std::optional<double> ssim;  ///< absent when the image is smaller than the window
  std::optional<double> uiqi;
  std::size_t uiqi_skipped = 0;
  std::optional<double> ergas;  ///< absent when a reference band mean is zero
  std::vector<std::size_t> ergas_zero_bands;
  double sam_deg = 0.0;
  std::size_t sam_skipped = 0;
  std::vector<BandMetrics> per_band;
};

MetricReport metric_report(const DenseTensor& x, const DenseTensor& y, const MetricOptions& options = {});

/// Largest entry; used as the PSNR peak for non 8-bit data.
double data_max(const DenseTensor& x);

}  // namespace tubal
