#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gad/error.hpp"
#include "gad/scoring.hpp"
#include "oracles.hpp"

namespace {

TEST(Scoring, LogBinomialMatchesExactIntegers) {
  for (std::size_t n : {0u, 1u, 5u, 30u, 200u, 10000u})
    for (std::size_t k : {0u, 1u, 2u, 3u, 15u, 100u}) {
      if (k > n) continue;
      const double exact = oracle::exact_log_binomial(n, k);
      EXPECT_NEAR(gad::log_binomial(n, k), exact, 1e-12 * std::max(1.0, exact)) << n << ' ' << k;
    }
  EXPECT_EQ(gad::log_binomial(7, 0), 0.0);
  EXPECT_EQ(gad::log_binomial(7, 7), 0.0);
  EXPECT_THROW(gad::log_binomial(3, 4), gad::DomainError);
}

TEST(Scoring, LogScoreMatchesExactArithmetic) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(1e-12, 1.0);
  std::uniform_int_distribution<std::size_t> t(1, 30);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t T = t(rng);
    const std::size_t Tc = 1 + rng() % T;
    const std::size_t D = 1 + rng() % 12;
    const std::size_t N = 1 + rng() % D;
    std::vector<double> p(Tc), lp(Tc);
    for (std::size_t i = 0; i < Tc; ++i) lp[i] = std::log(p[i] = u(rng));
    const double exact = oracle::exact_log_score(D, N, T, p);
    const double got = gad::log_score(D, N, T, lp);
    EXPECT_NEAR(got, exact, 1e-9 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Scoring, LogScoreRejectsInvalidArguments) {
  const std::vector<double> lp{-1.0, -2.0};
  EXPECT_THROW(gad::log_score(3, 4, 10, lp), gad::DomainError);
  EXPECT_THROW(gad::log_score(3, 1, 1, lp), gad::DomainError);
  const std::vector<double> positive{-1.0, 0.5};
  EXPECT_THROW(gad::log_score(3, 1, 10, positive), gad::DomainError);
}

TEST(Scoring, OptimalSubsetMatchesExhaustiveSearch) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t T = 1 + rng() % 15;
    const std::size_t D = 1 + rng() % 10;
    const std::size_t N = 1 + rng() % D;
    const std::size_t min_size = 1 + rng() % std::min<std::size_t>(T, 3);
    std::vector<double> lp(T);
    for (double& v : lp) v = std::log(std::pow(u(rng), 1.0 + 6.0 * u(rng)) + 1e-300);
    const auto sel = gad::optimal_sample_subset(lp, D, N, T, {min_size});
    const double expected = oracle::exhaustive_subset_min(lp, D, N, min_size);
    EXPECT_NEAR(sel.log_score, expected, 1e-9 * std::max(1.0, std::abs(expected))) << trial;
    EXPECT_GE(sel.count, min_size);
  }
}

TEST(Scoring, SelectionIsLowestPValuePrefix) {
  const std::vector<double> lp{-0.1, -30.0, -0.2, -25.0, -0.05};
  const auto sel = gad::optimal_sample_subset(lp, 4, 1, 5);
  const std::vector<std::size_t> order{1, 3, 2, 0, 4};
  EXPECT_EQ(sel.order, order);
  // every extra sample lowers the score, so the whole batch wins
  ASSERT_EQ(sel.count, 5u);
  EXPECT_NEAR(sel.log_score, std::log(4.0) - 55.35, 1e-12);
}

TEST(Scoring, PrefixScoresAreComparedExactly) {
  // prefix 1: ln 2 - ln 2 = 0; prefix 2: ln 1 - ln 2 + 0 = -ln 2
  const std::vector<double> lp{-std::log(2.0), 0.0};
  const auto sel = gad::optimal_sample_subset(lp, 1, 1, 2);
  EXPECT_EQ(sel.count, 2u);
  EXPECT_NEAR(sel.log_score, -std::log(2.0), 1e-15);
  const auto at_least_two = gad::optimal_sample_subset(lp, 1, 1, 2, {2});
  EXPECT_EQ(at_least_two.count, 2u);
}

TEST(Scoring, FirstIncreaseStopsEarly) {
  // Score sequence over prefixes: decreases, increases, then decreases below.
  const std::vector<double> lp{-10.0, -0.1, -0.1, -0.1, -0.1, -0.1};
  const auto global = gad::optimal_sample_subset(lp, 1, 1, 6);
  const auto first = gad::optimal_sample_subset(lp, 1, 1, 6, {1, gad::SubsetRule::first_increase});
  EXPECT_EQ(first.count, 1u);
  EXPECT_LE(global.log_score, first.log_score);
  EXPECT_NEAR(first.log_score, std::log(6.0) - 10.0, 1e-12);
}

}  // namespace
