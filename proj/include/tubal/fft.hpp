#pragma once

#include <cstddef>

#include "tubal/tensor.hpp"

namespace tubal {

/// Default tolerance for the residual-imaginary check in ifft_tube_real.
inline constexpr double kDefaultRealTolerance = 1e-8;

/// Number of Fourier slices that must be computed explicitly for a real
/// signal of length T; the rest follow from conjugate symmetry.
/// Equals ceil((T+1)/2).
constexpr std::size_t half_spectrum(std::size_t tube_length) noexcept {
  return tube_length == 0 ? 0 : tube_length / 2 + 1;
}

/// Conjugate partner of 0-based Fourier slice k.
constexpr std::size_t mirror_index(std::size_t k, std::size_t tube_length) noexcept {
  return k == 0 ? 0 : tube_length - k;
}

/// Unnormalized DFT of every fiber along the last mode.
ComplexTensor fft_tube(const DenseTensor& x);
ComplexTensor fft_tube(const ComplexTensor& x);

/// Inverse DFT along the last mode with 1/T scaling.
ComplexTensor ifft_tube(const ComplexTensor& x);

/// Inverse DFT along the last mode, returning the real part. Throws
/// Errc::residual_imaginary when max|imag| > tol * (1 + max|real|).
DenseTensor ifft_tube_real(const ComplexTensor& x, double tol = kDefaultRealTolerance);

}  // namespace tubal
