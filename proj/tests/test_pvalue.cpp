#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gad/error.hpp"
#include "gad/normal.hpp"
#include "gad/pvalue.hpp"
#include "oracles.hpp"

namespace {

gad::BivariateGMM random_pair_model(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> comps(1, 3);
  std::uniform_real_distribution<double> mean(-3.0, 3.0), sd(0.4, 2.0), rho(-0.9, 0.9),
      w(0.2, 1.0);
  gad::BivariateGMM m;
  const int L = comps(rng);
  double total = 0.0;
  for (int l = 0; l < L; ++l) {
    m.weights.push_back(w(rng));
    total += m.weights.back();
    m.means.push_back({mean(rng), mean(rng)});
    const double s0 = sd(rng), s1 = sd(rng), r = rho(rng);
    m.covariances.push_back({s0 * s0, r * s0 * s1, s1 * s1});
  }
  for (double& x : m.weights) x /= total;
  return m;
}

TEST(PValue, SingleComponentSingletonIsTwoSidedTail) {
  gad::UnivariateGMM m{{1.0}, {2.0}, {4.0}, false};
  EXPECT_DOUBLE_EQ(gad::singleton_pvalue(m, 2.0), 1.0);
  EXPECT_NEAR(gad::singleton_pvalue(m, 5.0), gad::two_sided_tail(1.5), 1e-15);
  EXPECT_NEAR(gad::singleton_pvalue(m, -1.0), gad::two_sided_tail(1.5), 1e-15);
}

TEST(PValue, SingletonIsPosteriorWeightedTail) {
  gad::UnivariateGMM m{{0.7, 0.3}, {0.0, 5.0}, {1.0, 0.25}, false};
  const double x = 3.5;
  const double d0 = 0.7 * oracle::phi(x) / 1.0;
  const double d1 = 0.3 * oracle::phi((x - 5.0) / 0.5) / 0.5;
  const double expected = (d0 * 2 * oracle::Phi(-3.5) + d1 * 2 * oracle::Phi(-3.0)) / (d0 + d1);
  EXPECT_NEAR(gad::singleton_pvalue(m, x), expected, 1e-14);
}

TEST(PValue, SingletonFloorsExtremeValues) {
  gad::UnivariateGMM m{{1.0}, {0.0}, {1.0}, false};
  EXPECT_EQ(gad::singleton_pvalue(m, 1e4), gad::kMinPValue);
  EXPECT_NEAR(std::log(gad::kMinPValue), gad::kLogMinPValue, 1e-12);
}

TEST(PValue, PairMatchesMonteCarloCornerMass) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> z(0.0, 1.5);
  for (int i = 0; i < 10; ++i) {
    const auto m = random_pair_model(rng);
    const std::array<double, 2> x{z(rng), z(rng)};
    const auto mc = oracle::corner_mass(m, x, 200'000, 100 + i);
    EXPECT_NEAR(gad::pair_pvalue(m, x), mc.estimate, 3.0 * mc.standard_error);
  }
}

TEST(PValue, PairIndependentComponentIsProductOfTails) {
  gad::BivariateGMM m;
  m.weights = {1.0};
  m.means = {{1.0, -1.0}};
  m.covariances = {{4.0, 0.0, 1.0}};
  const double expected = gad::two_sided_tail(1.0) * gad::two_sided_tail(0.5);
  EXPECT_NEAR(gad::pair_pvalue(m, {3.0, -1.5}), expected, 1e-15);
}

TEST(PValue, ConditionalIsRatioClamped) {
  std::mt19937_64 rng(5);
  const auto m = random_pair_model(rng);
  const std::array<double, 2> x{0.3, -1.2};
  const double pair = gad::pair_pvalue(m, x);
  const double single = gad::singleton_pvalue(gad::marginalize(m, 0), x[0]);
  const double c = gad::conditional_pvalue(m, x, 0);
  EXPECT_NEAR(c, std::min(1.0, pair / single), 1e-15);
  EXPECT_GE(c, gad::kMinPValue);
  EXPECT_LE(c, 1.0);
  EXPECT_THROW(gad::conditional_pvalue(m, x, 3), gad::DomainError);
}

TEST(PValue, TableAgreesWithDirectEvaluation) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<gad::UnivariateGMM> uni(3, gad::UnivariateGMM{{1.0}, {0.0}, {1.0}, false});
  std::vector<gad::BivariateGMM> bi;
  for (int p = 0; p < 3; ++p) bi.push_back(random_pair_model(rng));
  const gad::NullModel model({"a", "b", "c"}, uni, bi, std::vector<double>(9, 0.0), 100, "x");
  std::vector<double> values;
  for (int i = 0; i < 12; ++i) values.push_back(z(rng));
  const gad::DataBatch batch({"a", "b", "c"}, values);
  const gad::LogPValueTable table(model, batch, 2);
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_EQ(table.singleton(r, j), std::log(gad::singleton_pvalue(uni[j], batch.at(r, j))));
    EXPECT_EQ(table.pair(r, 2, 0), table.pair(r, 0, 2));
    EXPECT_EQ(table.pair(r, 1, 2),
              std::log(gad::pair_pvalue(model.bivariate(1, 2), {batch.at(r, 1), batch.at(r, 2)})));
  }
  const gad::DataBatch wrong({"a", "b"}, {1.0, 2.0});
  EXPECT_THROW(gad::LogPValueTable(model, wrong), gad::DataQualityError);
}

TEST(PValue, SingletonUniformUnderNull) {
  gad::UnivariateGMM m{{0.5, 0.5}, {-6.0, 6.0}, {1.0, 2.0}, false};
  const auto draws = gad::sample(m, 10'000, 31);
  std::vector<double> p;
  for (double x : draws) p.push_back(gad::singleton_pvalue(m, x));
  EXPECT_LT(oracle::ks_uniform(p), 0.03);
}

}  // namespace
