#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gad/data.hpp"
#include "gad/nullmodel.hpp"

namespace fixture {

/// A null model with random (valid) univariate and bivariate mixtures and a
/// random symmetric MI matrix. The MI values need not agree with the pair
/// models; tree tests only care about them as edge weights.
inline gad::NullModel random_model(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mean(-1.0, 1.0), sd(0.5, 1.5), rho(-0.8, 0.8),
      mi(0.0, 1.0);
  std::vector<std::string> names;
  std::vector<gad::UnivariateGMM> uni;
  for (std::size_t j = 0; j < d; ++j) {
    names.push_back("f" + std::to_string(j));
    const double s = sd(rng);
    uni.push_back({{1.0}, {mean(rng)}, {s * s}, false});
  }
  std::vector<gad::BivariateGMM> bi;
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      gad::BivariateGMM m;
      m.weights = {1.0};
      m.means = {{uni[j].means[0], uni[k].means[0]}};
      const double s0 = std::sqrt(uni[j].variances[0]), s1 = std::sqrt(uni[k].variances[0]);
      m.covariances = {{s0 * s0, rho(rng) * s0 * s1, s1 * s1}};
      bi.push_back(m);
    }
  std::vector<double> w(d * d, 0.0);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) w[j * d + k] = w[k * d + j] = mi(rng);
  return gad::NullModel(names, uni, bi, w, 1000, "fixture");
}

inline gad::DataBatch random_batch(const gad::NullModel& model, std::size_t rows,
                                   std::uint64_t seed, double spread = 1.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, spread);
  std::vector<double> values;
  for (std::size_t i = 0; i < rows * model.dimension(); ++i) values.push_back(z(rng));
  return gad::DataBatch(model.feature_names(), values);
}

}  // namespace fixture
