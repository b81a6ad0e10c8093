#pragma once

#include <cstdint>
#include <random>

#include "tubal/tensor.hpp"
#include "tubal/ttt.hpp"

namespace tubal {

/// Portable seeded generator: raw 64-bit mt19937_64 output mapped to
/// uniforms as (u >> 11) * 2^-53 and to normals by Box-Muller, so the same
/// seed yields the same bytes with any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// TTT format with standard normal cores at the given internal ranks.
TttFormat random_ttt(const Shape& modes, const Shape& ranks, std::size_t tube_length, Rng& rng);

/// Contraction of random_ttt, i.e. a tensor of exact TTT rank <= ranks.
DenseTensor planted_ttt(const Shape& modes, const Shape& ranks, std::size_t tube_length, Rng& rng);

/// I1 x I2 x T tensor a * b^T with a I1 x R x T and b I2 x R x T normal,
/// so its tubal rank is at most R.
DenseTensor planted_tsvd(std::size_t i1, std::size_t i2, std::size_t tube_length, std::size_t rank, Rng& rng);

/// Adds normal noise scaled to level * ||x||_F.
DenseTensor add_noise(const DenseTensor& x, double level, Rng& rng);

/// Bernoulli mask: each entry is 0 (missing) with probability
/// missing_fraction, else 1.
DenseTensor bernoulli_mask(const Shape& shape, double missing_fraction, Rng& rng);

/// Elementwise product, used to hide the unobserved entries.
DenseTensor apply_mask(const DenseTensor& x, const DenseTensor& mask);

}  // namespace tubal
