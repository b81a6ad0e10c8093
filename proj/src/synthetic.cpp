#include "tubal/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "tubal/tprod.hpp"

namespace tubal {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

namespace {

DenseTensor normal_tensor(Shape shape, Rng& rng) {
  DenseTensor x(std::move(shape));
  for (double& v : x.data()) v = rng.normal();
  return x;
}

}  // namespace

TttFormat random_ttt(const Shape& modes, const Shape& ranks, std::size_t tube_length, Rng& rng) {
  require(modes.size() >= 2, Errc::invalid_argument, "TTT generator needs at least two hyper-modes");
  require(tube_length >= 1, Errc::invalid_argument, "tube length must be positive");
  const Shape internal = normalize_ranks(ranks, modes.size());
  TttFormat f;
  f.tube_length = tube_length;
  for (std::size_t n = 0; n < modes.size(); ++n) {
    require(modes[n] >= 1, Errc::invalid_argument, "mode sizes must be positive");
    const std::size_t left = n == 0 ? 1 : internal[n - 1];
    const std::size_t right = n + 1 == modes.size() ? 1 : internal[n];
    f.cores.push_back(normal_tensor({left, modes[n], right, tube_length}, rng));
  }
  return f;
}

DenseTensor planted_ttt(const Shape& modes, const Shape& ranks, std::size_t tube_length, Rng& rng) {
  return ttt_contract(random_ttt(modes, ranks, tube_length, rng));
}

DenseTensor planted_tsvd(std::size_t i1, std::size_t i2, std::size_t tube_length, std::size_t rank, Rng& rng) {
  require(i1 >= 1 && i2 >= 1 && tube_length >= 1 && rank >= 1, Errc::invalid_argument,
          "T-SVD generator needs positive sizes and rank");
  const DenseTensor a = normal_tensor({i1, rank, tube_length}, rng);
  const DenseTensor b = normal_tensor({i2, rank, tube_length}, rng);
  return tprod_fast(a, ttranspose(b));
}

DenseTensor add_noise(const DenseTensor& x, double level, Rng& rng) {
  require(level >= 0.0, Errc::invalid_argument, "noise level must be nonnegative");
  DenseTensor noise = normal_tensor(x.shape(), rng);
  const double nn = frobenius_norm(noise);
  const double scale = nn > 0.0 ? level * frobenius_norm(x) / nn : 0.0;
  DenseTensor out = x;
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] += scale * noise[i];
  return out;
}

DenseTensor bernoulli_mask(const Shape& shape, double missing_fraction, Rng& rng) {
  require(missing_fraction >= 0.0 && missing_fraction <= 1.0, Errc::invalid_argument,
          "missing fraction must lie in [0, 1]");
  DenseTensor m(shape);
  for (double& v : m.data()) v = rng.uniform() < missing_fraction ? 0.0 : 1.0;
  return m;
}

DenseTensor apply_mask(const DenseTensor& x, const DenseTensor& mask) {
  require(x.shape() == mask.shape(), Errc::shape_mismatch, "mask shape does not match data");
  DenseTensor out = x;
  for (std::size_t i = 0; i < out.numel(); ++i) out[i] = mask[i] != 0.0 ? x[i] : 0.0;
  return out;
}

}  // namespace tubal
