#pragma once

// Internal dense linear-algebra helpers shared by the decomposition modules.

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>

#include "tubal/tensor.hpp"

namespace tubal::detail {

template <class Scalar>
struct ThinSvd {
  Matrix<Scalar> u;
  Eigen::VectorXd sigma;  // nonincreasing
  Matrix<Scalar> v;
};

template <class Scalar>
ThinSvd<Scalar> thin_svd(const Matrix<Scalar>& a) {
  require(a.allFinite(), Errc::numeric_failure, "SVD input contains non-finite values");
  if (a.rows() == 0 || a.cols() == 0) return {Matrix<Scalar>(a.rows(), 0), Eigen::VectorXd(0), Matrix<Scalar>(a.cols(), 0)};
  Eigen::BDCSVD<Matrix<Scalar>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  require(svd.info() == Eigen::Success, Errc::numeric_failure, "SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// sum_{j >= r} sigma_j^2
inline double tail_energy(const Eigen::VectorXd& sigma, Eigen::Index r) {
  double s = 0.0;
  for (Eigen::Index j = r; j < sigma.size(); ++j) s += sigma(j) * sigma(j);
  return s;
}

/// Smallest r >= 1 whose discarded tail energy is within budget.
inline Eigen::Index rank_for_budget(const Eigen::VectorXd& sigma, double energy_budget) {
  if (sigma.size() == 0) return 0;
  double tail = 0.0;
  Eigen::Index r = sigma.size();
  while (r > 1) {
    const double next = tail + sigma(r - 1) * sigma(r - 1);
    if (next > energy_budget) break;
    tail = next;
    --r;
  }
  return r;
}

}  // namespace tubal::detail
