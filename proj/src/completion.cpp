#include "tubal/completion.hpp"

#include <cmath>
#include <limits>

#include "tubal/tsvd.hpp"
#include "tubal/ttt.hpp"

namespace tubal {
namespace {

struct Approximator {
  const DenseTensor& c;

  DenseTensor operator()(const TttRankBackend& b) const {
    return ttt_contract(ttt_svd(c, normalize_ranks(b.ranks, c.order() - 1)));
  }
  DenseTensor operator()(const TttToleranceBackend& b) const { return ttt_contract(ttt_svd_tolerance(c, b.eps_rel)); }
  DenseTensor operator()(const TsvdBackend& b) const {
    const Shape& s = c.shape();
    Shape third;
    if (s.size() == 2)
      third = {s[0], s[1], 1};
    else
      third = {s.front(), c.numel() / (s.front() * s.back()), s.back()};
    return tsvd_reconstruct(tsvd_truncated(c.reshaped(third), b.rank)).reshaped(s);
  }
};

double masked_relative_error(const DenseTensor& reference, const DenseTensor& approx, const DenseTensor& mask) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < reference.numel(); ++i) {
    if (mask[i] == 0.0) continue;
    const double d = reference[i] - approx[i];
    num += d * d;
    den += reference[i] * reference[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

DenseTensor low_rank_approximation(const DenseTensor& c, const CompletionBackend& backend) {
  require(c.order() >= 2, Errc::shape_mismatch, "completion needs at least a matrix");
  return std::visit(Approximator{c}, backend);
}

CompletionResult complete(const CompletionProblem& p) {
  const DenseTensor& m = p.observed;
  const DenseTensor& mask = p.mask;
  require(m.shape() == mask.shape(), Errc::shape_mismatch,
          "mask shape " + shape_to_string(mask.shape()) + " does not match data shape " + shape_to_string(m.shape()));
  for (std::size_t i = 0; i < mask.numel(); ++i) {
    require(mask[i] == 0.0 || mask[i] == 1.0, Errc::invalid_argument, "mask entries must be exactly 0 or 1");
    require(mask[i] == 1.0 || m[i] == 0.0, Errc::invalid_argument, "observed data must be zero outside the mask");
  }
  if (p.ground_truth)
    require(p.ground_truth->shape() == m.shape(), Errc::shape_mismatch, "ground truth shape does not match data");
  require(p.max_iters >= 1, Errc::invalid_argument, "completion needs at least one iteration");

  CompletionResult result;
  DenseTensor current = m;  // C_1 = M: unobserved entries start at zero
  DenseTensor previous_x;
  for (std::size_t it = 1; it <= p.max_iters; ++it) {
    DenseTensor x = low_rank_approximation(current, p.backend);

    CompletionStep step;
    step.iteration = it;
    if (it == 1) {
      step.relative_change = std::numeric_limits<double>::quiet_NaN();
    } else {
      const double base = frobenius_norm(previous_x);
      const double diff = difference_norm(x, previous_x);
      step.relative_change = base > 0.0 ? diff / base : diff;
    }
    step.observed_error = masked_relative_error(m, x, mask);

    DenseTensor next = x;
    for (std::size_t i = 0; i < next.numel(); ++i)
      if (mask[i] != 0.0) next[i] = m[i];

    if (p.ground_truth) {
      const double ref = frobenius_norm(*p.ground_truth);
      const double diff = difference_norm(*p.ground_truth, next);
      step.full_error = ref > 0.0 ? diff / ref : diff;
    }
    result.trace.push_back(step);

    // An unchanged iterate means the next approximation is identical.
    const bool stationary = next == current;
    result.estimate = std::move(next);
    result.low_rank = x;
    if (stationary || (it > 1 && step.relative_change <= p.stop_tol)) {
      result.converged = true;
      break;
    }
    current = result.estimate;
    previous_x = std::move(x);
  }
  return result;
}

}  // namespace tubal
