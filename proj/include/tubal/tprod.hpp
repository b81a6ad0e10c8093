#pragma once

#include <span>

#include "tubal/tensor.hpp"

namespace tubal {

/// Which Fourier slices tprod_fast multiplies explicitly.
enum class SpectrumMode {
  half,  ///< slices 0..ceil((T+1)/2)-1, the rest by conjugate mirroring
  full,  ///< all T slices
};

/// t-product by materializing circ(x) and multiplying by unfold(y).
/// O((I1*T)*(I2*T)*I4); kept as the slow ground-truth path.
DenseTensor tprod_reference(const DenseTensor& x, const DenseTensor& y);

/// t-product through the tube-mode FFT: one complex matrix product per
/// Fourier slice. x is I1 x I2 x T, y is I2 x I4 x T.
DenseTensor tprod_fast(const DenseTensor& x, const DenseTensor& y, SpectrumMode mode = SpectrumMode::half);

/// Slice-wise product of two tensors already in the Fourier domain.
ComplexTensor fourier_slice_product(const ComplexTensor& xh, const ComplexTensor& yh,
                                    SpectrumMode mode = SpectrumMode::half);

/// Transpose each frontal slice and reverse the order of slices 2..T.
DenseTensor ttranspose(const DenseTensor& x);

/// n x n x T tensor whose first frontal slice is the identity.
DenseTensor identity_tensor(std::size_t n, std::size_t tube_length);

/// max(||Q^T*Q - I||_F, ||Q*Q^T - I||_F) for a square-lateral Q.
double orthogonality_residual(const DenseTensor& q);
/// ||Q^T*Q - I_R||_F for an I x R x T factor.
double partial_orthogonality_residual(const DenseTensor& q);

bool is_orthogonal(const DenseTensor& q, double tol);
bool is_partially_orthogonal(const DenseTensor& q, double tol);

/// Largest off-diagonal magnitude over all Fourier slices.
double f_diagonal_residual(const DenseTensor& s);
bool is_f_diagonal(const DenseTensor& s, double tol);

/// Tubal outer product of hyper-vectors a_n (each I_n x T). The result is
/// I_1 x ... x I_N x T with tube (i_1..i_N) = a_1(i_1) (*) ... (*) a_N(i_N).
DenseTensor tubal_outer_product(std::span<const DenseTensor> vectors);

}  // namespace tubal
