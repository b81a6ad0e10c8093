#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tubal/completion.hpp"
#include "tubal/synthetic.hpp"

using namespace tubal;

TEST_CASE("observed entries are preserved at every iteration") {
  Rng rng(60);
  const DenseTensor x = planted_ttt({6, 6, 6}, {2, 2}, 4, rng);
  const DenseTensor mask = bernoulli_mask(x.shape(), 0.5, rng);
  const DenseTensor m = apply_mask(x, mask);
  for (std::size_t iters : {1u, 2u, 5u}) {
    CompletionProblem p{m, mask, TttRankBackend{{2, 2}}, iters, 0.0, std::nullopt};
    const CompletionResult r = complete(p);
    for (std::size_t i = 0; i < x.numel(); ++i)
      if (mask[i] == 1.0) REQUIRE(r.estimate[i] == m[i]);
    CHECK(r.trace.size() == iters);
  }
}

TEST_CASE("fully observed data stops after one iteration") {
  std::mt19937_64 gen(61);
  const DenseTensor x = oracle::random_tensor({4, 5, 3}, gen);
  DenseTensor mask(x.shape());
  for (double& v : mask.data()) v = 1.0;
  const CompletionResult r = complete({x, mask, TsvdBackend{2}, 100, 1e-4, std::nullopt});
  CHECK(r.trace.size() == 1);
  CHECK(r.converged);
  CHECK(r.estimate == x);
}

TEST_CASE("planted instance is recovered") {
  Rng rng(62);
  const DenseTensor x = planted_ttt({10, 10, 10}, {2, 2}, 4, rng);
  const DenseTensor mask = bernoulli_mask(x.shape(), 0.7, rng);
  CompletionProblem p{apply_mask(x, mask), mask, TttRankBackend{{2, 2}}, 50, 1e-9, x};
  const CompletionResult r = complete(p);
  const double err = oracle::rel_diff(x, r.estimate);
  CHECK(err <= 0.05);
  REQUIRE(r.trace.back().full_error.has_value());
  CHECK(*r.trace.back().full_error == doctest::Approx(err).epsilon(1e-9));
  CHECK(std::isnan(r.trace.front().relative_change));
}

TEST_CASE("T-SVD backend on a planted tubal-rank tensor") {
  Rng rng(63);
  const DenseTensor x = planted_tsvd(12, 12, 5, 2, rng);
  const DenseTensor mask = bernoulli_mask(x.shape(), 0.4, rng);
  const CompletionResult r = complete({apply_mask(x, mask), mask, TsvdBackend{2}, 200, 1e-10, std::nullopt});
  CHECK(oracle::rel_diff(x, r.estimate) <= 0.05);
}

TEST_CASE("backends accept their shapes") {
  std::mt19937_64 gen(64);
  const DenseTensor x2 = oracle::random_tensor({4, 5}, gen);
  CHECK(low_rank_approximation(x2, TsvdBackend{4}).shape() == x2.shape());
  const DenseTensor x4 = oracle::random_tensor({3, 3, 2, 4}, gen);
  CHECK(low_rank_approximation(x4, TsvdBackend{3}).shape() == x4.shape());
  CHECK(low_rank_approximation(x4, TttToleranceBackend{0.0}).shape() == x4.shape());
  const Shape boundary{1, 3, 2, 1};
  CHECK(low_rank_approximation(x4, TttRankBackend{boundary}).shape() == x4.shape());
}

TEST_CASE("invalid problems are rejected") {
  const DenseTensor m({2, 2, 2});
  DenseTensor mask({2, 2, 2});
  mask[0] = 0.5;
  CHECK_THROWS_AS(complete({m, mask, TsvdBackend{1}}), Error);
  CHECK_THROWS_AS(complete({m, DenseTensor({2, 2}), TsvdBackend{1}}), Error);
  DenseTensor leaked({2, 2, 2});
  leaked[3] = 1.0;
  CHECK_THROWS_AS(complete({leaked, DenseTensor({2, 2, 2}), TsvdBackend{1}}), Error);
}
