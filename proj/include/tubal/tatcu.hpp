#pragma once

#include <span>
#include <vector>

#include "tubal/tensor.hpp"
#include "tubal/tt.hpp"
#include "tubal/ttt.hpp"

namespace tubal {

/// Error budget of one Fourier slice.
struct SliceBudget {
  std::size_t slice_index = 0;  ///< 0-based frequency
  double energy = 0.0;          ///< ||X_hat_k||_F^2
  double eta = 0.0;             ///< absolute local tolerance
};

/// eta_k = eps_rel * ||X_hat_k||_F, so sum eta_k^2 = eps_rel^2 * sum energy.
std::vector<SliceBudget> allocate_budgets(std::span<const double> energies, double eps_rel);

/// One complex TT per Fourier slice.
struct SpectralTtSet {
  std::vector<TtComplex> slices;
  /// Boundary-augmented componentwise-maximum profile after synchronization.
  Shape synchronized_ranks;
};

/// Zero-pads every slice to the componentwise-maximum rank profile.
SpectralTtSet synchronize_ranks(SpectralTtSet set);

struct TatcuOptions {
  /// Extra rounds with all budgets halved when the verified error misses eps.
  std::size_t max_refinements = 3;
  std::size_t max_sweeps = 4;
};

struct TatcuResult {
  TttFormat format;
  double relative_error = 0.0;
  std::size_t refinements = 0;
  /// Verified relative error after each round.
  std::vector<double> round_errors;
  std::vector<SliceBudget> budgets;
  /// max |imag| / (1 + max |real|) over the inverse-transformed cores.
  double imag_residual = 0.0;
};

/// Fourier-slice TTT construction under a global relative tolerance. x has
/// shape I_1 x ... x I_N x T with N >= 2. Throws ToleranceNotMet when the
/// refinement rounds run out.
TatcuResult tatcu(const DenseTensor& x, double eps_rel, const TatcuOptions& options = {});

}  // namespace tubal
