#include "tubal/tprod.hpp"

#include <algorithm>
#include <cmath>

#include "tubal/fft.hpp"
#include "tubal/parallel.hpp"

namespace tubal {
namespace {

void require_third_order(const DenseTensor& x, const char* what) {
  require(x.order() == 3, Errc::shape_mismatch,
          std::string(what) + " expects a third-order tensor, got " + shape_to_string(x.shape()));
}

void require_conformable(const Shape& xs, const Shape& ys) {
  require(xs.size() == 3 && ys.size() == 3, Errc::shape_mismatch, "t-product expects third-order tensors");
  require(xs[1] == ys[0] && xs[2] == ys[2], Errc::shape_mismatch,
          "t-product dimension mismatch: " + shape_to_string(xs) + " * " + shape_to_string(ys));
}

}  // namespace

DenseTensor tprod_reference(const DenseTensor& x, const DenseTensor& y) {
  require_conformable(x.shape(), y.shape());
  const std::size_t n1 = x.dim(0), n2 = x.dim(1), n4 = y.dim(1), t = x.dim(2);
  const auto N1 = static_cast<Eigen::Index>(n1), N2 = static_cast<Eigen::Index>(n2);

  // Block (i, j) of circ(x) is frontal slice (i - j) mod T.
  Eigen::MatrixXd circ(N1 * static_cast<Eigen::Index>(t), N2 * static_cast<Eigen::Index>(t));
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j)
      circ.block(static_cast<Eigen::Index>(i) * N1, static_cast<Eigen::Index>(j) * N2, N1, N2) =
          slice_view(x, (i + t - j) % t);

  // unfold(y) stacks the frontal slices vertically, which is exactly the
  // column-major memory of each slice laid one after another.
  Eigen::MatrixXd unfolded(N2 * static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(n4));
  for (std::size_t k = 0; k < t; ++k)
    unfolded.block(static_cast<Eigen::Index>(k) * N2, 0, N2, static_cast<Eigen::Index>(n4)) = slice_view(y, k);

  const Eigen::MatrixXd prod = circ * unfolded;
  DenseTensor out({n1, n4, t});
  for (std::size_t k = 0; k < t; ++k)
    slice_view(out, k) = prod.block(static_cast<Eigen::Index>(k) * N1, 0, N1, static_cast<Eigen::Index>(n4));
  return out;
}

ComplexTensor fourier_slice_product(const ComplexTensor& xh, const ComplexTensor& yh, SpectrumMode mode) {
  require_conformable(xh.shape(), yh.shape());
  const std::size_t t = xh.dim(2);
  ComplexTensor ch({xh.dim(0), yh.dim(1), t});
  const std::size_t explicit_slices = mode == SpectrumMode::half ? half_spectrum(t) : t;

  parallel_for(explicit_slices,
               [&](std::size_t k) { slice_view(ch, k).noalias() = slice_view(xh, k) * slice_view(yh, k); });

  for (std::size_t k = explicit_slices; k < t; ++k)
    slice_view(ch, k) = slice_view(ch, mirror_index(k, t)).conjugate();
  return ch;
}

DenseTensor tprod_fast(const DenseTensor& x, const DenseTensor& y, SpectrumMode mode) {
  require_conformable(x.shape(), y.shape());
  return ifft_tube_real(fourier_slice_product(fft_tube(x), fft_tube(y), mode));
}

DenseTensor ttranspose(const DenseTensor& x) {
  require_third_order(x, "ttranspose");
  const std::size_t t = x.dim(2);
  DenseTensor out({x.dim(1), x.dim(0), t});
  for (std::size_t k = 0; k < t; ++k) slice_view(out, k) = slice_view(x, mirror_index(k, t)).transpose();
  return out;
}

DenseTensor identity_tensor(std::size_t n, std::size_t tube_length) {
  require(n >= 1 && tube_length >= 1, Errc::invalid_argument, "identity tensor needs n, T >= 1");
  DenseTensor out({n, n, tube_length});
  for (std::size_t i = 0; i < n; ++i) out({i, i, 0}) = 1.0;
  return out;
}

double partial_orthogonality_residual(const DenseTensor& q) {
  require_third_order(q, "orthogonality check");
  const DenseTensor gram = tprod_fast(ttranspose(q), q);
  return difference_norm(gram, identity_tensor(q.dim(1), q.dim(2)));
}

double orthogonality_residual(const DenseTensor& q) {
  require_third_order(q, "orthogonality check");
  require(q.dim(0) == q.dim(1), Errc::shape_mismatch,
          "orthogonality needs square lateral dimensions, got " + shape_to_string(q.shape()));
  const DenseTensor outer = tprod_fast(q, ttranspose(q));
  return std::max(partial_orthogonality_residual(q), difference_norm(outer, identity_tensor(q.dim(0), q.dim(2))));
}

bool is_orthogonal(const DenseTensor& q, double tol) { return orthogonality_residual(q) <= tol; }

bool is_partially_orthogonal(const DenseTensor& q, double tol) { return partial_orthogonality_residual(q) <= tol; }

double f_diagonal_residual(const DenseTensor& s) {
  require_third_order(s, "f-diagonal check");
  const ComplexTensor sh = fft_tube(s);
  double worst = 0.0;
  for (std::size_t k = 0; k < sh.dim(2); ++k) {
    const auto slice = slice_view(sh, k);
    for (Eigen::Index j = 0; j < slice.cols(); ++j)
      for (Eigen::Index i = 0; i < slice.rows(); ++i)
        if (i != j) worst = std::max(worst, std::abs(slice(i, j)));
  }
  return worst;
}

bool is_f_diagonal(const DenseTensor& s, double tol) { return f_diagonal_residual(s) <= tol; }

DenseTensor tubal_outer_product(std::span<const DenseTensor> vectors) {
  require(!vectors.empty(), Errc::invalid_argument, "tubal outer product of an empty list");
  const std::size_t t = vectors.front().order() == 2 ? vectors.front().dim(1) : 0;
  Shape shape;
  std::vector<ComplexTensor> spectra;
  for (const DenseTensor& a : vectors) {
    require(a.order() == 2, Errc::shape_mismatch, "hyper-vectors must be I x T matrices");
    require(a.dim(1) == t, Errc::shape_mismatch, "tubal outer product: tube lengths differ");
    shape.push_back(a.dim(0));
    spectra.push_back(fft_tube(a));
  }
  shape.push_back(t);

  // Circular convolution becomes a pointwise product per frequency.
  ComplexTensor out(shape);
  const std::size_t entries = out.numel() / t;
  std::vector<std::size_t> index(vectors.size(), 0);
  for (std::size_t e = 0; e < entries; ++e) {
    for (std::size_t k = 0; k < t; ++k) {
      cplx v(1.0, 0.0);
      for (std::size_t n = 0; n < spectra.size(); ++n) v *= spectra[n][index[n] + k * spectra[n].dim(0)];
      out[e + k * entries] = v;
    }
    for (std::size_t n = 0; n < index.size(); ++n) {
      if (++index[n] < shape[n]) break;
      index[n] = 0;
    }
  }
  return ifft_tube_real(out);
}

}  // namespace tubal
