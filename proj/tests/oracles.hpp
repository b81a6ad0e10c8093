#pragma once

// Independent reference implementations for tests. Everything here works by
// plain loops over indices and never calls the library's FFT or SVD code.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tubal/tensor.hpp"
#include "tubal/tt.hpp"
#include "tubal/ttt.hpp"

namespace oracle {

using tubal::DenseTensor;
using tubal::Shape;

inline DenseTensor random_tensor(const Shape& shape, std::mt19937_64& gen) {
  std::normal_distribution<double> dist;
  DenseTensor x(shape);
  for (double& v : x.data()) v = dist(gen);
  return x;
}

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const DenseTensor& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

inline double rel_diff(const DenseTensor& ref, const DenseTensor& x) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ref.numel(); ++i) {
    num += (ref[i] - x[i]) * (ref[i] - x[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

/// C(i,l,k) = sum_j sum_m X(i,j,m) Y(j,l,(k-m) mod T).
inline DenseTensor tprod(const DenseTensor& x, const DenseTensor& y) {
  const std::size_t n1 = x.dim(0), n2 = x.dim(1), n4 = y.dim(1), t = x.dim(2);
  DenseTensor c({n1, n4, t});
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t m = 0; m < t; ++m)
      for (std::size_t l = 0; l < n4; ++l)
        for (std::size_t j = 0; j < n2; ++j)
          for (std::size_t i = 0; i < n1; ++i) c({i, l, k}) += x({i, j, m}) * y({j, l, (k + t - m) % t});
  return c;
}

inline std::vector<std::complex<double>> dft(const std::vector<double>& a) {
  const std::size_t t = a.size();
  std::vector<std::complex<double>> out(t);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t n = 0; n < t; ++n)
      out[k] += a[n] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k * n % t) / static_cast<double>(t));
  return out;
}

inline std::vector<double> circular_convolution(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t t = a.size();
  std::vector<double> c(t, 0.0);
  for (std::size_t k = 0; k < t; ++k)
    for (std::size_t m = 0; m < t; ++m) c[k] += a[m] * b[(k + t - m) % t];
  return c;
}

/// Contracts a TTT format tube by tube using circular convolutions.
inline DenseTensor ttt_contract(const tubal::TttFormat& f) {
  const std::size_t t = f.tube_length;
  Shape modes;
  for (const auto& c : f.cores) modes.push_back(c.dim(1));
  Shape full = modes;
  full.push_back(t);
  DenseTensor out(full);
  const std::size_t entries = out.numel() / t;
  std::vector<std::size_t> idx(modes.size(), 0);
  for (std::size_t e = 0; e < entries; ++e) {
    // cur[r] is the tube of the partial chain ending in rank index r.
    std::vector<std::vector<double>> cur(1, std::vector<double>(t, 0.0));
    cur[0][0] = 1.0;
    for (std::size_t n = 0; n < modes.size(); ++n) {
      const auto& core = f.cores[n];
      std::vector<std::vector<double>> next(core.dim(2), std::vector<double>(t, 0.0));
      for (std::size_t r = 0; r < core.dim(0); ++r)
        for (std::size_t s = 0; s < core.dim(2); ++s) {
          std::vector<double> tube(t);
          for (std::size_t k = 0; k < t; ++k) tube[k] = core({r, idx[n], s, k});
          const auto conv = circular_convolution(cur[r], tube);
          for (std::size_t k = 0; k < t; ++k) next[s][k] += conv[k];
        }
      cur = std::move(next);
    }
    for (std::size_t k = 0; k < t; ++k) out[e + k * entries] = cur[0][k];
    for (std::size_t n = 0; n < idx.size(); ++n) {
      if (++idx[n] < modes[n]) break;
      idx[n] = 0;
    }
  }
  return out;
}

/// Classical TT contraction entry by entry.
template <class Scalar>
tubal::Tensor<Scalar> tt_contract(const tubal::TtFormat<Scalar>& f) {
  Shape modes;
  for (const auto& c : f.cores) modes.push_back(c.dim(1));
  tubal::Tensor<Scalar> out(modes);
  std::vector<std::size_t> idx(modes.size(), 0);
  for (std::size_t e = 0; e < out.numel(); ++e) {
    std::vector<Scalar> cur(1, Scalar(1));
    for (std::size_t n = 0; n < modes.size(); ++n) {
      const auto& core = f.cores[n];
      std::vector<Scalar> next(core.dim(2), Scalar(0));
      for (std::size_t r = 0; r < core.dim(0); ++r)
        for (std::size_t s = 0; s < core.dim(2); ++s) next[s] += cur[r] * core({r, idx[n], s});
      cur = std::move(next);
    }
    out[e] = cur[0];
    for (std::size_t n = 0; n < idx.size(); ++n) {
      if (++idx[n] < modes[n]) break;
      idx[n] = 0;
    }
  }
  return out;
}

/// Random TTT format with normal cores; test-side generator.
inline tubal::TttFormat random_ttt(const Shape& modes, const Shape& ranks, std::size_t t, std::mt19937_64& gen) {
  tubal::TttFormat f;
  f.tube_length = t;
  for (std::size_t n = 0; n < modes.size(); ++n) {
    const std::size_t left = n == 0 ? 1 : ranks[n - 1];
    const std::size_t right = n + 1 == modes.size() ? 1 : ranks[n];
    f.cores.push_back(random_tensor({left, modes[n], right, t}, gen));
  }
  return f;
}

inline std::size_t uniform_index(std::mt19937_64& gen, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
}

}  // namespace oracle
