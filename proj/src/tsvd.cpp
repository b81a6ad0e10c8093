#include "tubal/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "linalg.hpp"
#include "tubal/fft.hpp"
#include "tubal/parallel.hpp"
#include "tubal/tprod.hpp"

namespace tubal {
namespace {

struct SliceSvds {
  std::size_t rows = 0, cols = 0, tube = 0;
  std::vector<detail::ThinSvd<cplx>> slices;  // explicit half spectrum only
};

bool self_conjugate(std::size_t k, std::size_t t) { return k == 0 || 2 * k == t; }

SliceSvds factor_slices(const DenseTensor& x) {
  require(x.order() == 3, Errc::shape_mismatch, "T-SVD expects a third-order tensor, got " + shape_to_string(x.shape()));
  SliceSvds out{x.dim(0), x.dim(1), x.dim(2), {}};
  const ComplexTensor xh = fft_tube(x);
  const std::size_t h = half_spectrum(out.tube);
  out.slices.resize(h);

  parallel_for(h, [&](std::size_t k) {
    if (self_conjugate(k, out.tube)) {
      // These slices are real; a real SVD keeps their factors real, which is
      // what the conjugate-symmetric assembly needs.
      const Eigen::MatrixXd re = slice_view(xh, k).real();
      auto svd = detail::thin_svd<double>(re);
      out.slices[k] = {svd.u.cast<cplx>(), svd.sigma, svd.v.cast<cplx>()};
    } else {
      out.slices[k] = detail::thin_svd<cplx>(slice_view(xh, k));
    }
  });
  return out;
}

double tail_over_spectrum(const SliceSvds& f, std::size_t rank) {
  double tail = 0.0;
  for (std::size_t k = 0; k < f.slices.size(); ++k) {
    const double weight = self_conjugate(k, f.tube) ? 1.0 : 2.0;
    tail += weight * detail::tail_energy(f.slices[k].sigma, static_cast<Eigen::Index>(rank));
  }
  return tail;
}

TsvdFactors assemble(const SliceSvds& f, std::size_t rank) {
  const std::size_t t = f.tube;
  const auto r = static_cast<Eigen::Index>(rank);
  ComplexTensor uh({f.rows, rank, t}), sh({rank, rank, t}), vh({f.cols, rank, t});
  TsvdFactors out;
  out.spectrum.resize(t);

  for (std::size_t k = 0; k < t; ++k) {
    const std::size_t src = std::min(k, mirror_index(k, t));
    const auto& svd = f.slices[src];
    const bool mirrored = src != k;
    auto u = slice_view(uh, k);
    auto v = slice_view(vh, k);
    auto s = slice_view(sh, k);
    u = svd.u.leftCols(r);
    v = svd.v.leftCols(r);
    if (mirrored) {
      u = u.conjugate().eval();
      v = v.conjugate().eval();
    }
    s.setZero();
    for (Eigen::Index j = 0; j < r; ++j) s(j, j) = svd.sigma(j);
    out.spectrum[k].assign(svd.sigma.data(), svd.sigma.data() + svd.sigma.size());
  }

  out.u = ifft_tube_real(uh);
  out.s = ifft_tube_real(sh);
  out.v = ifft_tube_real(vh);
  out.rank = rank;
  out.truncation_error = std::sqrt(tail_over_spectrum(f, rank) / static_cast<double>(t));
  return out;
}

}  // namespace

TsvdFactors tsvd_truncated(const DenseTensor& x, std::size_t rank) {
  require(x.order() == 3, Errc::shape_mismatch, "T-SVD expects a third-order tensor, got " + shape_to_string(x.shape()));
  const std::size_t max_rank = std::min(x.dim(0), x.dim(1));
  require(rank >= 1 && rank <= max_rank, Errc::rank_out_of_range,
          "tubal rank " + std::to_string(rank) + " outside [1, " + std::to_string(max_rank) + "]");
  return assemble(factor_slices(x), rank);
}

TsvdFactors tsvd_tolerance(const DenseTensor& x, double delta) {
  require(delta >= 0.0, Errc::invalid_argument, "T-SVD tolerance must be nonnegative");
  const SliceSvds f = factor_slices(x);
  const std::size_t max_rank = std::min(f.rows, f.cols);
  require(max_rank >= 1, Errc::rank_out_of_range, "T-SVD of an empty tensor");
  // Parseval: ||E||_F^2 = (1/T) * sum over all Fourier slices of ||E_k||_F^2.
  const double budget = delta * delta * static_cast<double>(f.tube);
  std::size_t rank = max_rank;
  while (rank > 1 && tail_over_spectrum(f, rank - 1) <= budget) --rank;
  return assemble(f, rank);
}

DenseTensor tsvd_reconstruct(const TsvdFactors& f) {
  return tprod_fast(tprod_fast(f.u, f.s), ttranspose(f.v));
}

}  // namespace tubal
