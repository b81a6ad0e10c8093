#pragma once

#include <vector>

#include "tubal/tensor.hpp"

namespace tubal {

/// Truncated T-SVD x ~= u * s * v^T.
struct TsvdFactors {
  DenseTensor u;  ///< I1 x R x T, partially orthogonal
  DenseTensor s;  ///< R x R x T, f-diagonal
  DenseTensor v;  ///< I2 x R x T, partially orthogonal
  std::size_t rank = 0;
  /// ||x - u*s*v^T||_F, evaluated from the discarded singular values.
  double truncation_error = 0.0;
  /// Singular values of every Fourier slice (all T, mirrored ones copied).
  std::vector<std::vector<double>> spectrum;
};

/// Rank-r truncated T-SVD; requires 1 <= r <= min(I1, I2).
TsvdFactors tsvd_truncated(const DenseTensor& x, std::size_t rank);

/// Smallest tubal rank R >= 1 with ||x - u*s*v^T||_F <= delta. The rank is
/// picked in the Fourier domain from the tail energy, which must stay
/// within delta^2 * T under the unnormalized forward FFT.
TsvdFactors tsvd_tolerance(const DenseTensor& x, double delta);

/// u * s * ttranspose(v).
DenseTensor tsvd_reconstruct(const TsvdFactors& f);

}  // namespace tubal
