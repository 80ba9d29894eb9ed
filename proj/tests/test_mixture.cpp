#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "gad/error.hpp"
#include "gad/mixture.hpp"

namespace {

gad::SampleMatrix<1> two_modes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  std::bernoulli_distribution coin(0.3);
  gad::SampleMatrix<1> x(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i) = coin(rng) ? 8.0 + 0.5 * z(rng) : z(rng);
  return x;
}

TEST(Mixture, ParameterCount) {
  // L * (d + d(d+1)/2) + L - 1
  EXPECT_EQ(gad::mixture_parameter_count(1, 1), 2);
  EXPECT_EQ(gad::mixture_parameter_count(3, 1), 8);
  EXPECT_EQ(gad::mixture_parameter_count(2, 2), 11);
  EXPECT_EQ(gad::mixture_parameter_count(4, 10), 4 * 65 + 3);
}

TEST(Mixture, BicSelectsTwoSeparatedModes) {
  gad::EMConfig config;
  config.seed = 3;
  const auto fit = gad::fit_mixture<1>(two_modes(2000, 1), config);
  ASSERT_EQ(fit.mixture.components(), 2u);
  std::vector<std::size_t> order{0, 1};
  if (fit.mixture.means[0](0) > fit.mixture.means[1](0)) std::swap(order[0], order[1]);
  EXPECT_NEAR(fit.mixture.means[order[0]](0), 0.0, 0.1);
  EXPECT_NEAR(fit.mixture.means[order[1]](0), 8.0, 0.1);
  EXPECT_NEAR(fit.mixture.weights[order[1]], 0.3, 0.03);
  EXPECT_NEAR(fit.mixture.covariances[order[1]](0, 0), 0.25, 0.04);
}

TEST(Mixture, SingleGaussianClosedForm) {
  gad::SampleMatrix<1> x(4);
  x << 1.0, 2.0, 3.0, 6.0;
  const auto fit = gad::fit_mixture_order<1>(x, 1, {});
  EXPECT_DOUBLE_EQ(fit.mixture.weights[0], 1.0);
  EXPECT_DOUBLE_EQ(fit.mixture.means[0](0), 3.0);
  EXPECT_NEAR(fit.mixture.covariances[0](0, 0), 3.5, 1e-12);  // ML variance
  const double ll = -2.0 * std::log(2.0 * M_PI * 3.5) - 2.0;
  EXPECT_NEAR(fit.log_likelihood, ll, 1e-9);
  EXPECT_NEAR(fit.bic, -2.0 * ll + 2.0 * std::log(4.0), 1e-9);
}

TEST(Mixture, DeterministicForSeed) {
  gad::EMConfig config;
  config.seed = 17;
  const auto x = two_modes(500, 5);
  const auto a = gad::fit_mixture<1>(x, config);
  const auto b = gad::fit_mixture<1>(x, config);
  ASSERT_EQ(a.mixture.components(), b.mixture.components());
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
  for (std::size_t l = 0; l < a.mixture.components(); ++l)
    EXPECT_EQ(a.mixture.means[l](0), b.mixture.means[l](0));
}

TEST(Mixture, ConstantColumnIsDegenerate) {
  gad::SampleMatrix<1> x = gad::SampleMatrix<1>::Constant(100, 4.2);
  const auto fit = gad::fit_mixture<1>(x, {});
  EXPECT_TRUE(fit.degenerate);
  ASSERT_EQ(fit.mixture.components(), 1u);
  EXPECT_DOUBLE_EQ(fit.mixture.means[0](0), 4.2);
  EXPECT_GT(fit.mixture.covariances[0](0, 0), 0.0);
}

TEST(Mixture, BivariateRecoversCorrelation) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z(0.0, 1.0);
  gad::SampleMatrix<2> x(3000, 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const double a = z(rng), b = z(rng);
    x(i, 0) = a;
    x(i, 1) = 0.7 * a + std::sqrt(1 - 0.49) * b;
  }
  gad::EMConfig config;
  config.seed = 1;
  const auto fit = gad::fit_mixture<2>(x, config);
  ASSERT_EQ(fit.mixture.components(), 1u);
  const auto& c = fit.mixture.covariances[0];
  EXPECT_NEAR(c(0, 1) / std::sqrt(c(0, 0) * c(1, 1)), 0.7, 0.03);
}

TEST(Mixture, DynamicDimensionLogDensity) {
  gad::SampleMatrix<Eigen::Dynamic> x(4, 3);
  x << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  gad::GaussianMixture<Eigen::Dynamic> m;
  m.weights = {1.0};
  m.means = {Eigen::VectorXd::Zero(3)};
  m.covariances = {Eigen::MatrixXd::Identity(3, 3)};
  const Eigen::VectorXd ll = gad::mixture_log_density(m, x);
  EXPECT_NEAR(ll(0), -1.5 * std::log(2.0 * M_PI), 1e-12);
  EXPECT_NEAR(ll(1), -1.5 * std::log(2.0 * M_PI) - 0.5, 1e-12);
}

TEST(Mixture, OrderCappedByRows) {
  gad::EMConfig config;
  config.bic_patience = 100;
  const auto fit = gad::fit_mixture<1>(two_modes(30, 2), config);
  EXPECT_LE(fit.bic_by_order.size(), 3u);
}

}  // namespace
