#include "tubal/tatcu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tubal/fft.hpp"
#include "tubal/parallel.hpp"

namespace tubal {

std::vector<SliceBudget> allocate_budgets(std::span<const double> energies, double eps_rel) {
  require(eps_rel >= 0.0, Errc::invalid_argument, "tolerance must be nonnegative");
  std::vector<SliceBudget> out;
  out.reserve(energies.size());
  for (std::size_t k = 0; k < energies.size(); ++k) {
    require(energies[k] >= 0.0, Errc::invalid_argument, "slice energy must be nonnegative");
    out.push_back({k, energies[k], eps_rel * std::sqrt(energies[k])});
  }
  return out;
}

namespace {

ComplexTensor pad_core(const ComplexTensor& c, std::size_t r0, std::size_t r1) {
  if (c.dim(0) == r0 && c.dim(2) == r1) return c;
  ComplexTensor out({r0, c.dim(1), r1});
  for (std::size_t b = 0; b < c.dim(2); ++b)
    for (std::size_t i = 0; i < c.dim(1); ++i)
      for (std::size_t a = 0; a < c.dim(0); ++a) out({a, i, b}) = c({a, i, b});
  return out;
}

TtComplex zero_tt(const Shape& modes) {
  TtComplex f;
  for (std::size_t d : modes) f.cores.emplace_back(Shape{1, d, 1});
  return f;
}

TtComplex conjugate_tt(const TtComplex& f) {
  TtComplex out;
  for (const auto& c : f.cores) out.cores.push_back(conj(c));
  return out;
}

TtComplex as_complex_tt(const TtReal& f) {
  TtComplex out;
  for (const auto& c : f.cores) out.cores.push_back(to_complex(c));
  return out;
}

ComplexTensor frequency_slice(const ComplexTensor& xh, const Shape& modes, std::size_t k) {
  const std::size_t m = xh.numel() / xh.shape().back();
  auto begin = xh.data().begin() + static_cast<std::ptrdiff_t>(k * m);
  return ComplexTensor(modes, std::vector<cplx>(begin, begin + static_cast<std::ptrdiff_t>(m)));
}

TttFormat assemble(const SpectralTtSet& set, std::size_t t, double& imag_residual) {
  const std::size_t n_cores = set.slices.front().order();
  const Shape& ranks = set.synchronized_ranks;
  TttFormat f;
  f.tube_length = t;
  for (std::size_t n = 0; n < n_cores; ++n) {
    const auto& c0 = set.slices.front().cores[n];
    ComplexTensor stacked({ranks[n], c0.dim(1), ranks[n + 1], t});
    const std::size_t block = ranks[n] * c0.dim(1) * ranks[n + 1];
    for (std::size_t k = 0; k < t; ++k) {
      const auto src = set.slices[k].cores[n].data();
      std::copy(src.begin(), src.end(), stacked.data().begin() + static_cast<std::ptrdiff_t>(k * block));
    }
    const ComplexTensor full = ifft_tube(stacked);
    double max_real = 0.0, max_imag = 0.0;
    for (const cplx& v : full.data()) {
      max_real = std::max(max_real, std::abs(v.real()));
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
    imag_residual = std::max(imag_residual, max_imag / (1.0 + max_real));
    f.cores.push_back(ifft_tube_real(stacked));
  }
  return f;
}

}  // namespace

SpectralTtSet synchronize_ranks(SpectralTtSet set) {
  require(!set.slices.empty(), Errc::invalid_argument, "no slices to synchronize");
  const std::size_t n_cores = set.slices.front().order();
  Shape ranks(n_cores + 1, 0);
  for (const auto& s : set.slices) {
    s.validate();
    require(s.order() == n_cores, Errc::shape_mismatch, "slice TT formats have different orders");
    const Shape r = s.ranks();
    for (std::size_t n = 0; n <= n_cores; ++n) ranks[n] = std::max(ranks[n], r[n]);
  }
  for (auto& s : set.slices)
    for (std::size_t n = 0; n < n_cores; ++n) s.cores[n] = pad_core(s.cores[n], ranks[n], ranks[n + 1]);
  set.synchronized_ranks = std::move(ranks);
  return set;
}

TatcuResult tatcu(const DenseTensor& x, double eps_rel, const TatcuOptions& options) {
  require(eps_rel >= 0.0, Errc::invalid_argument, "TATCU tolerance must be nonnegative");
  require(x.order() >= 3, Errc::shape_mismatch,
          "TATCU needs at least two hyper-modes plus the tube mode, got " + shape_to_string(x.shape()));
  for (std::size_t d : x.shape()) require(d >= 1, Errc::invalid_argument, "TATCU needs nonzero mode sizes");

  const std::size_t t = x.shape().back();
  const Shape modes(x.shape().begin(), x.shape().end() - 1);
  const ComplexTensor xh = fft_tube(x);
  const double norm_x = frobenius_norm(x);

  std::vector<ComplexTensor> slices;
  std::vector<double> energies;
  for (std::size_t k = 0; k < t; ++k) {
    slices.push_back(frequency_slice(xh, modes, k));
    energies.push_back(squared_norm(slices.back()));
  }

  TatcuResult result;
  result.budgets = allocate_budgets(energies, eps_rel);
  const std::size_t h = half_spectrum(t);
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t round = 0; round <= options.max_refinements; ++round) {
    const double scale = std::ldexp(1.0, -static_cast<int>(round));
    SpectralTtSet set;
    set.slices.resize(t);

    parallel_for(h, [&](std::size_t k) {
      const double eta = scale * result.budgets[k].eta;
      if (energies[k] == 0.0) {
        set.slices[k] = zero_tt(modes);
      } else if (k == 0 || 2 * k == t) {
        // DC and Nyquist slices are real; fitting them in real arithmetic
        // keeps the assembled cores conjugate-symmetric.
        DenseTensor re(modes);
        for (std::size_t i = 0; i < re.numel(); ++i) re[i] = slices[k][i].real();
        AtcuOptions<double> opts;
        opts.max_sweeps = options.max_sweeps;
        set.slices[k] = as_complex_tt(atcu(re, eta, opts).format);
      } else {
        AtcuOptions<cplx> opts;
        opts.max_sweeps = options.max_sweeps;
        set.slices[k] = atcu(slices[k], eta, opts).format;
      }
    });
    for (std::size_t k = h; k < t; ++k) set.slices[k] = conjugate_tt(set.slices[mirror_index(k, t)]);

    set = synchronize_ranks(std::move(set));
    double imag_residual = 0.0;
    TttFormat f = assemble(set, t, imag_residual);

    const double err = norm_x > 0.0 ? relative_error(x, ttt_contract(f)) : 0.0;
    result.round_errors.push_back(err);
    result.refinements = round;
    best = std::min(best, err);
    if (err <= eps_rel) {
      result.format = std::move(f);
      result.relative_error = err;
      result.imag_residual = imag_residual;
      return result;
    }
  }
  throw ToleranceNotMet("TATCU missed relative tolerance " + std::to_string(eps_rel) + " after " +
                            std::to_string(options.max_refinements) + " refinements (best " + std::to_string(best) + ")",
                        best);
}

}  // namespace tubal
