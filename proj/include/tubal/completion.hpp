#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "tubal/tensor.hpp"

namespace tubal {

/// TTT-SVD at a fixed internal rank profile.
struct TttRankBackend {
  Shape ranks;
};
/// TTT-SVD at a relative tolerance.
struct TttToleranceBackend {
  double eps_rel = 0.1;
};
/// Truncated T-SVD at a tubal rank. Inputs of order > 3 are viewed as
/// I_1 x (I_2 ... I_N) x T, order-2 inputs as I_1 x I_2 x 1.
struct TsvdBackend {
  std::size_t rank = 1;
};

using CompletionBackend = std::variant<TttRankBackend, TttToleranceBackend, TsvdBackend>;

struct CompletionProblem {
  DenseTensor observed;  ///< M, zero where the mask is zero
  DenseTensor mask;      ///< Omega, entries exactly 0 or 1
  CompletionBackend backend;
  std::size_t max_iters = 100;
  double stop_tol = 1e-4;
  /// Optional reference used only to fill CompletionStep::full_error.
  std::optional<DenseTensor> ground_truth;
};

struct CompletionStep {
  std::size_t iteration = 0;  ///< 1-based
  /// ||X_n - X_{n-1}||_F / ||X_{n-1}||_F; NaN on the first iteration.
  double relative_change = 0.0;
  /// Relative error of X_n on observed entries.
  double observed_error = 0.0;
  /// Relative error of the completed tensor against ground_truth.
  std::optional<double> full_error;
};

struct CompletionResult {
  /// Omega (.) M + (1 - Omega) (.) X_n: observed entries restored.
  DenseTensor estimate;
  /// X_n, the last low-rank approximation.
  DenseTensor low_rank;
  std::vector<CompletionStep> trace;
  bool converged = false;
};

/// Backend low-rank approximation L(C).
DenseTensor low_rank_approximation(const DenseTensor& c, const CompletionBackend& backend);

/// Alternates X_n = L(C_n) and C_{n+1} = Omega (.) M + (1 - Omega) (.) X_n
/// starting from C_1 = M.
CompletionResult complete(const CompletionProblem& problem);

}  // namespace tubal
