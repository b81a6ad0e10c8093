#include "tubal/tt.hpp"

#include <algorithm>
#include <cmath>

#include "linalg.hpp"

namespace tubal {
namespace {

template <class Scalar>
Matrix<Scalar> as_matrix(const Tensor<Scalar>& t, std::size_t rows, std::size_t cols) {
  return Eigen::Map<const Matrix<Scalar>>(t.data().data(), static_cast<Eigen::Index>(rows),
                                          static_cast<Eigen::Index>(cols));
}

template <class Scalar>
Tensor<Scalar> from_matrix(const Matrix<Scalar>& m, Shape shape) {
  return Tensor<Scalar>(std::move(shape), std::vector<Scalar>(m.data(), m.data() + m.size()));
}

/// Reinterpret a column-major matrix with a new row count.
template <class Scalar>
Matrix<Scalar> rematrix(const Matrix<Scalar>& m, std::size_t rows) {
  const auto r = static_cast<Eigen::Index>(rows);
  return Eigen::Map<const Matrix<Scalar>>(m.data(), r, m.size() / r);
}

template <class Scalar>
void require_valid_dims(const Tensor<Scalar>& x) {
  require(x.order() >= 1, Errc::invalid_argument, "TT decomposition of an order-0 tensor");
  for (std::size_t d : x.shape())
    require(d >= 1, Errc::invalid_argument, "TT decomposition needs nonzero mode sizes, got " + shape_to_string(x.shape()));
}

/// Sequential unfold + truncated SVD. `choose(n, sigma)` returns the rank
/// kept at split n.
template <class Scalar, class Chooser>
TtFormat<Scalar> sequential_svd(const Tensor<Scalar>& x, Chooser choose) {
  require_valid_dims(x);
  const Shape& dims = x.shape();
  const std::size_t n_modes = dims.size();
  TtFormat<Scalar> f;
  if (n_modes == 1) {
    f.cores.push_back(x.reshaped({1, dims[0], 1}));
    return f;
  }
  Matrix<Scalar> carry = as_matrix(x, dims[0], x.numel() / dims[0]);
  std::size_t r_prev = 1;
  std::size_t rest = x.numel();
  for (std::size_t n = 0; n + 1 < n_modes; ++n) {
    rest /= dims[n];
    const Matrix<Scalar> unfolding = rematrix(carry, r_prev * dims[n]);
    const auto svd = detail::thin_svd<Scalar>(unfolding);
    const auto r = static_cast<Eigen::Index>(choose(n, svd.sigma));
    f.cores.push_back(from_matrix<Scalar>(svd.u.leftCols(r), {r_prev, dims[n], static_cast<std::size_t>(r)}));
    f.local_errors.push_back(std::sqrt(detail::tail_energy(svd.sigma, r)));
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> kept = svd.sigma.head(r).template cast<Scalar>();
    carry = kept.asDiagonal() * svd.v.leftCols(r).adjoint();
    r_prev = static_cast<std::size_t>(r);
  }
  f.cores.push_back(from_matrix(carry, {r_prev, dims.back(), 1}));
  return f;
}

/// Left interface of cores [0, n): P_left x R_n.
template <class Scalar>
Matrix<Scalar> left_interface(const TtFormat<Scalar>& f, std::size_t n) {
  Matrix<Scalar> left = Matrix<Scalar>::Identity(1, 1);
  for (std::size_t m = 0; m < n; ++m) {
    const auto& c = f.cores[m];
    const Matrix<Scalar> prod = left * as_matrix(c, c.dim(0), c.dim(1) * c.dim(2));
    left = rematrix(prod, static_cast<std::size_t>(left.rows()) * c.dim(1));
  }
  return left;
}

/// Right interface of cores [n, N): R_n x P_right.
template <class Scalar>
Matrix<Scalar> right_interface(const TtFormat<Scalar>& f, std::size_t n) {
  Matrix<Scalar> right = Matrix<Scalar>::Identity(1, 1);
  for (std::size_t m = f.order(); m-- > n;) {
    const auto& c = f.cores[m];
    const Matrix<Scalar> prod = as_matrix(c, c.dim(0) * c.dim(1), c.dim(2)) * right;
    right = rematrix(prod, c.dim(0));
  }
  return right;
}

/// Orthogonalize cores N-1..1 from the right by LQ factorizations, pushing
/// the non-orthogonal factor into core 0.
template <class Scalar>
void right_orthogonalize(TtFormat<Scalar>& f) {
  for (std::size_t n = f.order(); n-- > 1;) {
    auto& c = f.cores[n];
    const std::size_t r0 = c.dim(0), in = c.dim(1), r1 = c.dim(2);
    const Matrix<Scalar> m = as_matrix(c, r0, in * r1);
    Eigen::HouseholderQR<Matrix<Scalar>> qr(m.adjoint());
    const auto k = std::min<Eigen::Index>(m.rows(), m.cols());
    const Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(m.cols(), k);
    const Matrix<Scalar> r = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();
    c = from_matrix<Scalar>(q.adjoint(), {static_cast<std::size_t>(k), in, r1});

    auto& prev = f.cores[n - 1];
    const Matrix<Scalar> pm = as_matrix(prev, prev.dim(0) * prev.dim(1), prev.dim(2)) * r.adjoint();
    prev = from_matrix(pm, {prev.dim(0), prev.dim(1), static_cast<std::size_t>(k)});
  }
}

template <class Scalar>
class TwoCoreSweeper {
 public:
  TwoCoreSweeper(const Tensor<Scalar>& x, double eps_abs, TtFormat<Scalar>& f)
      : x_(x), eps_sq_(eps_abs * eps_abs), f_(f) {}

  /// Re-fit cores n, n+1 against x and split them; returns the error of
  /// the resulting approximation (exact when the environment is orthonormal).
  double update(std::size_t n, bool left_to_right) {
    const Shape& dims = x_.shape();
    const std::size_t rn = f_.cores[n].dim(0);
    const std::size_t rn2 = f_.cores[n + 1].dim(2);
    const Matrix<Scalar> left = left_interface(f_, n);        // P_left x R_n
    const Matrix<Scalar> right = right_interface(f_, n + 2);  // R_{n+2} x P_right
    const std::size_t p_left = static_cast<std::size_t>(left.rows());

    // Supercore: projection of x onto the orthonormal environment.
    const Matrix<Scalar> xm = as_matrix(x_, p_left, x_.numel() / p_left);
    const Matrix<Scalar> projected_left = left.adjoint() * xm;
    const Matrix<Scalar> supercore =
        rematrix<Scalar>(projected_left, rn * dims[n] * dims[n + 1]) * right.adjoint();

    // Distance from x to the environment's range, computed directly.
    const Matrix<Scalar> back = left * rematrix<Scalar>(supercore * right, rn);
    const double projection_sq = (xm - back).squaredNorm();

    const Matrix<Scalar> pair = rematrix(supercore, rn * dims[n]);
    const auto svd = detail::thin_svd<Scalar>(pair);
    const double budget = eps_sq_ - projection_sq;
    const Eigen::Index r = budget < 0.0 ? svd.sigma.size() : detail::rank_for_budget(svd.sigma, budget);
    const auto rr = static_cast<std::size_t>(r);

    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> kept = svd.sigma.head(r).template cast<Scalar>();
    const auto sigma = kept.asDiagonal();
    if (left_to_right) {
      f_.cores[n] = from_matrix<Scalar>(svd.u.leftCols(r), {rn, dims[n], rr});
      f_.cores[n + 1] = from_matrix<Scalar>(sigma * svd.v.leftCols(r).adjoint(), {rr, dims[n + 1], rn2});
    } else {
      f_.cores[n] = from_matrix<Scalar>(svd.u.leftCols(r) * sigma, {rn, dims[n], rr});
      f_.cores[n + 1] = from_matrix<Scalar>(svd.v.leftCols(r).adjoint(), {rr, dims[n + 1], rn2});
    }
    return std::sqrt(projection_sq + detail::tail_energy(svd.sigma, r));
  }

 private:
  const Tensor<Scalar>& x_;
  double eps_sq_;
  TtFormat<Scalar>& f_;
};

template <class Scalar>
double contract_error(const Tensor<Scalar>& x, const TtFormat<Scalar>& f) {
  const Tensor<Scalar> y = tt_contract(f);
  double s = 0.0;
  for (std::size_t i = 0; i < x.numel(); ++i) s += std::norm(x[i] - y[i]);
  return std::sqrt(s);
}

template <class Scalar>
double norm_of(const Tensor<Scalar>& x) {
  double s = 0.0;
  for (const Scalar& v : x.data()) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace

template <class Scalar>
Shape TtFormat<Scalar>::ranks() const {
  Shape r;
  if (cores.empty()) return r;
  r.push_back(cores.front().dim(0));
  for (const auto& c : cores) r.push_back(c.dim(2));
  return r;
}

template <class Scalar>
Shape TtFormat<Scalar>::mode_sizes() const {
  Shape s;
  for (const auto& c : cores) s.push_back(c.dim(1));
  return s;
}

template <class Scalar>
std::size_t TtFormat<Scalar>::param_count() const {
  std::size_t n = 0;
  for (const auto& c : cores) n += c.numel();
  return n;
}

template <class Scalar>
void TtFormat<Scalar>::validate() const {
  require(!cores.empty(), Errc::bad_format, "TT format has no cores");
  for (std::size_t n = 0; n < cores.size(); ++n) {
    require(cores[n].order() == 3, Errc::bad_format, "TT core " + std::to_string(n) + " is not third order");
    if (n > 0)
      require(cores[n].dim(0) == cores[n - 1].dim(2), Errc::bad_format,
              "TT rank chain broken between cores " + std::to_string(n - 1) + " and " + std::to_string(n));
  }
  require(cores.front().dim(0) == 1 && cores.back().dim(2) == 1, Errc::bad_format, "TT boundary ranks must be 1");
}

template <class Scalar>
TtFormat<Scalar> tt_svd(const Tensor<Scalar>& x, std::span<const std::size_t> ranks) {
  require_valid_dims(x);
  const Shape& dims = x.shape();
  require(ranks.size() + 1 == dims.size(), Errc::rank_out_of_range,
          "TT-SVD needs " + std::to_string(dims.size() - 1) + " internal ranks, got " + std::to_string(ranks.size()));
  std::size_t r_prev = 1;
  std::size_t rest = x.numel();
  for (std::size_t n = 0; n < ranks.size(); ++n) {
    rest /= dims[n];
    const std::size_t cap = std::min(r_prev * dims[n], rest);
    require(ranks[n] >= 1 && ranks[n] <= cap, Errc::rank_out_of_range,
            "TT rank r_" + std::to_string(n + 1) + " = " + std::to_string(ranks[n]) + " infeasible (max " +
                std::to_string(cap) + ")");
    r_prev = ranks[n];
  }
  return sequential_svd(x, [&](std::size_t n, const Eigen::VectorXd&) { return ranks[n]; });
}

template <class Scalar>
TtFormat<Scalar> tt_svd_tolerance(const Tensor<Scalar>& x, double eps_rel) {
  require(eps_rel >= 0.0, Errc::invalid_argument, "TT-SVD tolerance must be nonnegative");
  require_valid_dims(x);
  const std::size_t splits = x.order() > 1 ? x.order() - 1 : 1;
  const double delta = eps_rel * norm_of(x) / std::sqrt(static_cast<double>(splits));
  const double budget = delta * delta;
  return sequential_svd(x, [&](std::size_t, const Eigen::VectorXd& sigma) {
    return static_cast<std::size_t>(detail::rank_for_budget(sigma, budget));
  });
}

template <class Scalar>
Tensor<Scalar> tt_contract(const TtFormat<Scalar>& f) {
  f.validate();
  const Matrix<Scalar> full = left_interface(f, f.order());
  return from_matrix(full, f.mode_sizes());
}

template <class Scalar>
AtcuResult<Scalar> atcu(const Tensor<Scalar>& x, double eps_abs, const AtcuOptions<Scalar>& options) {
  require(eps_abs >= 0.0, Errc::invalid_argument, "ATCU error budget must be nonnegative");
  require_valid_dims(x);
  const double norm_x = norm_of(x);
  auto fallback = [&] { return norm_x > 0.0 ? tt_svd_tolerance(x, eps_abs / norm_x) : tt_svd_tolerance(x, 0.0); };

  AtcuResult<Scalar> result;
  if (options.init) {
    result.format = *options.init;
    result.format.validate();
    require(result.format.mode_sizes() == x.shape(), Errc::shape_mismatch, "ATCU initial format does not match tensor shape");
  } else {
    result.format = fallback();
  }
  result.format.local_errors.clear();
  TtFormat<Scalar>& f = result.format;
  const std::size_t n_modes = f.order();

  if (n_modes >= 2) {
    right_orthogonalize(f);
    TwoCoreSweeper<Scalar> sweeper(x, eps_abs, f);
    double err = 0.0;
    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
      const Shape before = f.ranks();
      for (std::size_t n = 0; n + 1 < n_modes; ++n) {
        err = sweeper.update(n, true);
        if (options.on_step) options.on_step(f, n + 1);
      }
      for (std::size_t n = n_modes - 1; n-- > 0;) {
        err = sweeper.update(n, false);
        if (options.on_step) options.on_step(f, n);
      }
      ++result.sweeps;
      if (f.ranks() == before && err <= eps_abs) break;
    }
  }

  // Rounding slack on the order of the SVD backward error.
  const double slack = 1e-13 * norm_x;
  result.error = contract_error(x, f);
  if (result.error > eps_abs + slack) {
    TtFormat<Scalar> alt = fallback();
    const double alt_err = contract_error(x, alt);
    if (alt_err < result.error) {
      result.format = std::move(alt);
      result.error = alt_err;
      result.fell_back = true;
    }
  }
  result.format.local_errors.clear();
  return result;
}

template <class Scalar>
double left_orthogonality_residual(const Tensor<Scalar>& core) {
  const Matrix<Scalar> m = as_matrix(core, core.dim(0) * core.dim(1), core.dim(2));
  return (m.adjoint() * m - Matrix<Scalar>::Identity(m.cols(), m.cols())).norm();
}

template <class Scalar>
double right_orthogonality_residual(const Tensor<Scalar>& core) {
  const Matrix<Scalar> m = as_matrix(core, core.dim(0), core.dim(1) * core.dim(2));
  return (m * m.adjoint() - Matrix<Scalar>::Identity(m.rows(), m.rows())).norm();
}

#define TUBAL_INSTANTIATE_TT(S)                                                                  \
  template struct TtFormat<S>;                                                                   \
  template TtFormat<S> tt_svd<S>(const Tensor<S>&, std::span<const std::size_t>);                \
  template TtFormat<S> tt_svd_tolerance<S>(const Tensor<S>&, double);                            \
  template Tensor<S> tt_contract<S>(const TtFormat<S>&);                                         \
  template AtcuResult<S> atcu<S>(const Tensor<S>&, double, const AtcuOptions<S>&);               \
  template double left_orthogonality_residual<S>(const Tensor<S>&);                              \
  template double right_orthogonality_residual<S>(const Tensor<S>&);

TUBAL_INSTANTIATE_TT(double)
TUBAL_INSTANTIATE_TT(cplx)

#undef TUBAL_INSTANTIATE_TT

}  // namespace tubal
