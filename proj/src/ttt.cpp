#include "tubal/ttt.hpp"

#include <cmath>

#include "tubal/fft.hpp"
#include "tubal/tprod.hpp"
#include "tubal/tsvd.hpp"

namespace tubal {

Shape TttFormat::ranks() const {
  Shape r;
  for (std::size_t n = 0; n + 1 < cores.size(); ++n) r.push_back(cores[n].dim(2));
  return r;
}

Shape TttFormat::boundary_ranks() const {
  Shape r{1};
  for (std::size_t v : ranks()) r.push_back(v);
  r.push_back(1);
  return r;
}

Shape TttFormat::mode_sizes() const {
  Shape s;
  for (const auto& c : cores) s.push_back(c.dim(1));
  return s;
}

Shape TttFormat::full_shape() const {
  Shape s = mode_sizes();
  s.push_back(tube_length);
  return s;
}

std::size_t TttFormat::param_count() const {
  std::size_t n = 0;
  for (const auto& c : cores) n += c.numel();
  return n;
}

void TttFormat::validate() const {
  require(!cores.empty(), Errc::bad_format, "TTT format has no cores");
  require(tube_length >= 1, Errc::bad_format, "TTT tube length must be positive");
  for (std::size_t n = 0; n < cores.size(); ++n) {
    const auto& c = cores[n];
    const std::string where = "TTT core " + std::to_string(n);
    require(c.order() == 4, Errc::bad_format, where + " is not stored as R x I x R x T");
    require(c.dim(3) == tube_length, Errc::bad_format, where + " has tube length " + std::to_string(c.dim(3)));
    require(c.dim(1) >= 1, Errc::bad_format, where + " has an empty mode");
    if (n > 0)
      require(c.dim(0) == cores[n - 1].dim(2), Errc::bad_format,
              "TTT rank chain broken between cores " + std::to_string(n - 1) + " and " + std::to_string(n));
  }
  require(cores.front().dim(0) == 1 && cores.back().dim(2) == 1, Errc::bad_format, "TTT boundary ranks must be 1");
}

std::size_t ttt_param_count(std::span<const std::size_t> modes, std::span<const std::size_t> ranks,
                            std::size_t tube_length) {
  require(!modes.empty() && ranks.size() + 1 == modes.size(), Errc::rank_out_of_range,
          "rank profile length does not match the number of modes");
  std::size_t total = 0;
  for (std::size_t n = 0; n < modes.size(); ++n) {
    const std::size_t left = n == 0 ? 1 : ranks[n - 1];
    const std::size_t right = n + 1 == modes.size() ? 1 : ranks[n];
    total += left * modes[n] * right * tube_length;
  }
  return total;
}

std::size_t ttt_param_count(const TttFormat& f) {
  f.validate();
  const Shape modes = f.mode_sizes();
  const Shape ranks = f.ranks();
  return ttt_param_count(modes, ranks, f.tube_length);
}

Shape normalize_ranks(std::span<const std::size_t> ranks, std::size_t n_modes) {
  if (ranks.size() + 1 == n_modes) return Shape(ranks.begin(), ranks.end());
  if (ranks.size() == n_modes + 1 && ranks.front() == 1 && ranks.back() == 1)
    return Shape(ranks.begin() + 1, ranks.end() - 1);
  fail(Errc::rank_out_of_range, "rank profile of length " + std::to_string(ranks.size()) + " does not fit " +
                                    std::to_string(n_modes) + " modes (expected " + std::to_string(n_modes - 1) +
                                    " internal or " + std::to_string(n_modes + 1) + " boundary-augmented ranks)");
}

namespace {

struct TttShape {
  Shape modes;
  std::size_t tube;
};

TttShape split_shape(const DenseTensor& x) {
  require(x.order() >= 2, Errc::shape_mismatch,
          "TTT needs at least one hyper-mode plus the tube mode, got " + shape_to_string(x.shape()));
  for (std::size_t d : x.shape())
    require(d >= 1, Errc::invalid_argument, "TTT needs nonzero mode sizes, got " + shape_to_string(x.shape()));
  TttShape s{Shape(x.shape().begin(), x.shape().end() - 1), x.shape().back()};
  return s;
}

/// Drives the reshape / truncated T-SVD recursion; `factor(C, step)` returns
/// the truncated T-SVD of the current hyper-matrix.
template <class Factor>
TttFormat sequential_tsvd(const DenseTensor& x, Factor factor) {
  const TttShape s = split_shape(x);
  const std::size_t n_modes = s.modes.size();
  const std::size_t t = s.tube;
  TttFormat f;
  f.tube_length = t;
  if (n_modes == 1) {
    f.cores.push_back(x.reshaped({1, s.modes[0], 1, t}));
    return f;
  }

  std::size_t rest = x.numel() / t;
  std::size_t r_prev = 1;
  DenseTensor carry = x;
  for (std::size_t n = 0; n + 1 < n_modes; ++n) {
    rest /= s.modes[n];
    DenseTensor c = std::move(carry).reshaped({r_prev * s.modes[n], rest, t});
    TsvdFactors svd = factor(c, n);
    const std::size_t r = svd.rank;
    // Rows of U are indexed (r_{n-1}, i_n) with r_{n-1} fastest, so the core
    // layout R_{n-1} x I_n x R_n x T is a pure reshape of U.
    f.cores.push_back(std::move(svd.u).reshaped({r_prev, s.modes[n], r, t}));
    f.local_errors.push_back(svd.truncation_error);
    carry = tprod_fast(svd.s, ttranspose(svd.v));
    r_prev = r;
  }
  f.cores.push_back(std::move(carry).reshaped({r_prev, s.modes.back(), 1, t}));
  return f;
}

}  // namespace

TttFormat ttt_svd(const DenseTensor& x, std::span<const std::size_t> ranks) {
  const TttShape s = split_shape(x);
  require(ranks.size() + 1 == s.modes.size(), Errc::rank_out_of_range,
          "TTT-SVD needs " + std::to_string(s.modes.size() - 1) + " internal ranks, got " + std::to_string(ranks.size()));
  std::size_t r_prev = 1;
  std::size_t rest = x.numel() / s.tube;
  for (std::size_t n = 0; n < ranks.size(); ++n) {
    rest /= s.modes[n];
    const std::size_t cap = std::min(r_prev * s.modes[n], rest);
    require(ranks[n] >= 1 && ranks[n] <= cap, Errc::rank_out_of_range,
            "tubal rank r_" + std::to_string(n + 1) + " = " + std::to_string(ranks[n]) + " infeasible (max " +
                std::to_string(cap) + ")");
    r_prev = ranks[n];
  }
  return sequential_tsvd(x, [&](const DenseTensor& c, std::size_t n) { return tsvd_truncated(c, ranks[n]); });
}

TttFormat ttt_svd_tolerance(const DenseTensor& x, double eps_rel) {
  require(eps_rel >= 0.0, Errc::invalid_argument, "TTT-SVD tolerance must be nonnegative");
  const TttShape s = split_shape(x);
  const std::size_t splits = s.modes.size() > 1 ? s.modes.size() - 1 : 1;
  const double delta = eps_rel * frobenius_norm(x) / std::sqrt(static_cast<double>(splits));
  return sequential_tsvd(x, [&](const DenseTensor& c, std::size_t) { return tsvd_tolerance(c, delta); });
}

DenseTensor ttt_contract(const TttFormat& f) {
  f.validate();
  const std::size_t t = f.tube_length;
  const auto& first = f.cores.front();
  // Hyper-matrix of the left part, kept in the Fourier domain throughout:
  // (I_1 ... I_n) x R_n x T.
  ComplexTensor left = fft_tube(first.reshaped({first.dim(1), first.dim(2), t}));
  for (std::size_t n = 1; n < f.order(); ++n) {
    const auto& c = f.cores[n];
    const ComplexTensor ch = fft_tube(c.reshaped({c.dim(0), c.dim(1) * c.dim(2), t}));
    const std::size_t rows = left.dim(0);
    left = fourier_slice_product(left, ch).reshaped({rows * c.dim(1), c.dim(2), t});
  }
  return ifft_tube_real(left).reshaped(f.full_shape());
}

TttFormat tsvd_as_ttt(const TsvdFactors& f) {
  const std::size_t t = f.u.dim(2), r = f.rank;
  TttFormat out;
  out.tube_length = t;
  out.cores.push_back(f.u.reshaped({1, f.u.dim(0), r, t}));
  out.cores.push_back(tprod_fast(f.s, ttranspose(f.v)).reshaped({r, f.v.dim(0), 1, t}));
  out.local_errors.push_back(f.truncation_error);
  return out;
}

Tube ttt_tube(const TttFormat& f, std::span<const std::size_t> index) {
  f.validate();
  require(index.size() == f.order(), Errc::index_out_of_range, "tube index has the wrong number of modes");
  const std::size_t t = f.tube_length;
  DenseTensor chain;
  for (std::size_t n = 0; n < f.order(); ++n) {
    const auto& c = f.cores[n];
    require(index[n] < c.dim(1), Errc::index_out_of_range,
            "tube index " + std::to_string(index[n]) + " out of range for mode " + std::to_string(n));
    DenseTensor lateral({c.dim(0), c.dim(2), t});
    for (std::size_t k = 0; k < t; ++k)
      for (std::size_t b = 0; b < c.dim(2); ++b)
        for (std::size_t a = 0; a < c.dim(0); ++a) lateral({a, b, k}) = c({a, index[n], b, k});
    chain = n == 0 ? std::move(lateral) : tprod_fast(chain, lateral);
  }
  return Tube{std::vector<double>(chain.data().begin(), chain.data().end())};
}

}  // namespace tubal
