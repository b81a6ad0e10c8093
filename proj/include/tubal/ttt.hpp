#pragma once

#include <span>
#include <vector>

#include "tubal/tensor.hpp"
#include "tubal/tsvd.hpp"

namespace tubal {

/// Tubal tensor train. Core n is stored as R_{n-1} x I_n x R_n x T (tube
/// mode last) with R_0 = R_N = 1; consecutive cores are linked by the
/// t-product.
struct TttFormat {
  std::vector<DenseTensor> cores;
  std::size_t tube_length = 0;
  /// Local T-SVD truncation errors delta_n recorded by ttt_svd (N-1 values).
  std::vector<double> local_errors;

  std::size_t order() const noexcept { return cores.size(); }
  /// Internal ranks (R_1, ..., R_{N-1}).
  Shape ranks() const;
  /// (R_0, ..., R_N) with the unit boundary ranks.
  Shape boundary_ranks() const;
  Shape mode_sizes() const;
  /// I_1 x ... x I_N x T
  Shape full_shape() const;
  std::size_t param_count() const;
  /// Throws Errc::bad_format on inconsistent cores.
  void validate() const;
};

/// Stored entries for a TTT format with the given hyper-modes, internal
/// ranks and tube length: R_1 I_1 T + sum R_{n-1} I_n R_n T + R_{N-1} I_N T.
std::size_t ttt_param_count(std::span<const std::size_t> modes, std::span<const std::size_t> ranks,
                            std::size_t tube_length);
std::size_t ttt_param_count(const TttFormat& f);

/// Accepts either internal (N-1 entries) or boundary-augmented (N+1
/// entries, first and last equal to 1) rank profiles; returns internal.
Shape normalize_ranks(std::span<const std::size_t> ranks, std::size_t n_modes);

/// Sequential TTT-SVD at a prescribed internal rank profile. x has shape
/// I_1 x ... x I_N x T.
TttFormat ttt_svd(const DenseTensor& x, std::span<const std::size_t> ranks);

/// Fixed-precision TTT-SVD: each step uses a truncated T-SVD with absolute
/// tolerance eps_rel ||x||_F / sqrt(N-1).
TttFormat ttt_svd_tolerance(const DenseTensor& x, double eps_rel);

/// Full reconstruction by chained t-products of the cores.
DenseTensor ttt_contract(const TttFormat& f);

/// Two-core TTT holding u and s * v^T, so it contracts to the T-SVD
/// reconstruction.
TttFormat tsvd_as_ttt(const TsvdFactors& f);

/// One tube X(i_1, ..., i_N, :) as the t-product chain of lateral slices.
Tube ttt_tube(const TttFormat& f, std::span<const std::size_t> index);

}  // namespace tubal
