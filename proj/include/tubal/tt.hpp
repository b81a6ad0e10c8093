#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tubal/tensor.hpp"

namespace tubal {

/// Classical tensor train. Core n has shape R_{n-1} x I_n x R_n with
/// R_0 = R_N = 1.
template <class Scalar>
struct TtFormat {
  std::vector<Tensor<Scalar>> cores;
  /// Local truncation errors recorded by tt_svd, one per split (N-1).
  std::vector<double> local_errors;

  std::size_t order() const noexcept { return cores.size(); }
  /// Boundary-augmented ranks (R_0, ..., R_N).
  Shape ranks() const;
  Shape mode_sizes() const;
  std::size_t param_count() const;
  /// Throws Errc::bad_format if cores are not third order or ranks do not chain.
  void validate() const;
};

using TtReal = TtFormat<double>;
using TtComplex = TtFormat<cplx>;

/// TT-SVD with prescribed internal ranks (r_1..r_{N-1}). Requires
/// r_n <= min(r_{n-1} I_n, I_{n+1} ... I_N).
template <class Scalar>
TtFormat<Scalar> tt_svd(const Tensor<Scalar>& x, std::span<const std::size_t> ranks);

/// TT-SVD with relative tolerance. Each split may discard energy up to
/// (eps_rel ||x|| / sqrt(N-1))^2, so the global relative error is <= eps_rel.
template <class Scalar>
TtFormat<Scalar> tt_svd_tolerance(const Tensor<Scalar>& x, double eps_rel);

template <class Scalar>
Tensor<Scalar> tt_contract(const TtFormat<Scalar>& f);

template <class Scalar>
struct AtcuOptions {
  /// A sweep is one left-to-right plus one right-to-left pass.
  std::size_t max_sweeps = 4;
  /// Starting point; TT-SVD at the same budget when absent.
  std::optional<TtFormat<Scalar>> init;
  /// Called after every two-core split with the current format and the
  /// index of the core that carries the norm (cores left of it are
  /// left-orthogonal, right of it right-orthogonal).
  std::function<void(const TtFormat<Scalar>&, std::size_t)> on_step;
};

template <class Scalar>
struct AtcuResult {
  TtFormat<Scalar> format;
  double error = 0.0;  ///< ||x - contract(format)||_F
  std::size_t sweeps = 0;
  bool fell_back = false;  ///< sweeps missed the budget; TT-SVD split returned instead
};

/// Alternating two-core update under an absolute Frobenius budget.
/// The result always satisfies ||x - contract(result)||_F <= eps_abs.
template <class Scalar>
AtcuResult<Scalar> atcu(const Tensor<Scalar>& x, double eps_abs, const AtcuOptions<Scalar>& options = {});

/// Left-orthogonality residual ||G^H G - I||_F of core n unfolded as
/// (R_{n-1} I_n) x R_n; right-orthogonality uses R_{n-1} x (I_n R_n).
template <class Scalar>
double left_orthogonality_residual(const Tensor<Scalar>& core);
template <class Scalar>
double right_orthogonality_residual(const Tensor<Scalar>& core);

}  // namespace tubal
