#include "tubal/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace tubal {
namespace {

// The FFTW planner is not reentrant; execution of a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void transform_tubes(const ComplexTensor& in, ComplexTensor& out, int sign) {
  require(in.order() >= 1, Errc::invalid_argument, "tube transform needs at least one mode");
  const std::size_t tube = in.shape().back();
  if (in.numel() == 0) return;
  const std::size_t fibers = in.numel() / tube;

  // Fibers along the last mode: element stride `fibers`, fiber spacing 1.
  int n = static_cast<int>(tube);
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data().data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data().data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n, static_cast<int>(fibers), src, nullptr, static_cast<int>(fibers), 1,
                              dst, nullptr, static_cast<int>(fibers), 1, sign, FFTW_ESTIMATE);
  }
  require(plan != nullptr, Errc::numeric_failure, "FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

}  // namespace

ComplexTensor fft_tube(const ComplexTensor& x) {
  ComplexTensor out(x.shape());
  transform_tubes(x, out, FFTW_FORWARD);
  return out;
}

ComplexTensor fft_tube(const DenseTensor& x) { return fft_tube(to_complex(x)); }

ComplexTensor ifft_tube(const ComplexTensor& x) {
  ComplexTensor out(x.shape());
  transform_tubes(x, out, FFTW_BACKWARD);
  if (x.order() >= 1 && x.shape().back() > 0) {
    const double scale = 1.0 / static_cast<double>(x.shape().back());
    for (cplx& v : out.data()) v *= scale;
  }
  return out;
}

DenseTensor ifft_tube_real(const ComplexTensor& x, double tol) {
  const ComplexTensor full = ifft_tube(x);
  DenseTensor out(full.shape());
  double max_real = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < full.numel(); ++i) {
    out[i] = full[i].real();
    max_real = std::max(max_real, std::abs(full[i].real()));
    max_imag = std::max(max_imag, std::abs(full[i].imag()));
  }
  if (!(max_imag <= tol * (1.0 + max_real)))
    fail(Errc::residual_imaginary, "inverse FFT left an imaginary residue of " + std::to_string(max_imag) +
                                       " (real scale " + std::to_string(max_real) +
                                       "); conjugate symmetry is broken");
  return out;
}

}  // namespace tubal
