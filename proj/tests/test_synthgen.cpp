#include <gtest/gtest.h>

#include <set>

#include "gad/error.hpp"
#include "gad/synthgen.hpp"
#include "oracles.hpp"

namespace {

TEST(Synth, PaperProportions) {
  gad::SyntheticSpec spec;
  spec.seed = 1;
  const auto data = gad::generate(spec);
  ASSERT_EQ(data.test.rows(), 10'000u);
  std::size_t anomalies = 0, c1 = 0, c2 = 0;
  for (const auto& l : data.test.labels()) {
    anomalies += l != gad::kNormalLabel;
    c1 += l == "cluster_1";
    c2 += l == "cluster_2";
  }
  EXPECT_EQ(anomalies, 500u);  // 5% of the test batch
  EXPECT_EQ(c1, 250u);
  EXPECT_EQ(c2, 250u);
  // Training normals are 20% of all normals.
  const double fraction = static_cast<double>(data.train.rows()) /
                          static_cast<double>(data.train.rows() + (10'000 - anomalies));
  EXPECT_NEAR(fraction, 0.2, 1e-4);
  EXPECT_FALSE(data.train.has_labels());
}

TEST(Synth, DeterministicAndDistinctIds) {
  gad::SyntheticSpec spec;
  spec.batch_size = 500;
  spec.seed = 9;
  const auto a = gad::generate(spec);
  const auto b = gad::generate(spec);
  EXPECT_EQ(a.test.values(), b.test.values());
  EXPECT_EQ(a.train.values(), b.train.values());
  std::set<std::string> ids(a.test.ids().begin(), a.test.ids().end());
  ids.insert(a.train.ids().begin(), a.train.ids().end());
  EXPECT_EQ(ids.size(), a.test.rows() + a.train.rows());
  spec.seed = 10;
  EXPECT_NE(gad::generate(spec).test.values(), a.test.values());
}

TEST(Synth, BayesThresholdError) {
  gad::SyntheticSpec spec;
  spec.seed = 2;
  const auto data = gad::generate(spec);
  EXPECT_NEAR(gad::threshold_error(spec, data.test), 0.1587, 0.01);
}

TEST(Synth, InformativeFeatureIsShifted) {
  gad::SyntheticSpec spec;
  spec.seed = 3;
  const auto data = gad::generate(spec);
  double mean = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < data.test.rows(); ++r)
    if (data.test.labels()[r] == "cluster_2") {
      mean += data.test.at(r, 7);
      ++n;
    }
  EXPECT_NEAR(mean / static_cast<double>(n), 2.0, 0.2);
}

// Every non-informative column of a cluster is drawn from the normal
// distribution. Each column gets a two-sample KS test at a Bonferroni-adjusted
// level; at 250 samples the statistic's own sampling spread is about 0.05, so
// the check is on the test's p-value rather than a fixed statistic.
TEST(Synth, NonInformativeColumnsMatchNormals) {
  gad::SyntheticSpec spec;
  spec.seed = 4;
  const auto data = gad::generate(spec);
  const std::size_t tests = 2 * (spec.dimension - 1);
  for (std::size_t c = 0; c < 2; ++c) {
    const std::string label = "cluster_" + std::to_string(c + 1);
    for (std::size_t f = 0; f < spec.dimension; ++f) {
      if (f == spec.informative[c]) continue;
      std::vector<double> cluster, normal;
      for (std::size_t r = 0; r < data.test.rows(); ++r) {
        if (data.test.labels()[r] == label) cluster.push_back(data.test.at(r, f));
        if (data.test.labels()[r] == gad::kNormalLabel) normal.push_back(data.test.at(r, f));
      }
      const double d = oracle::ks_two_sample(cluster, normal);
      EXPECT_GT(oracle::ks_pvalue(d, cluster.size(), normal.size()), 0.01 / tests)
          << label << " feature " << f << " D=" << d;
    }
  }
}

TEST(Synth, SpecValidationAndJson) {
  gad::SyntheticSpec spec;
  spec.informative = {3, 3};
  EXPECT_THROW(spec.validate(), gad::DomainError);
  spec.informative = {10};
  EXPECT_THROW(spec.validate(), gad::DomainError);
  spec.informative = {1, 2};
  spec.cluster_fraction = 0.5;
  EXPECT_THROW(spec.validate(), gad::DomainError);

  gad::SyntheticSpec ok;
  ok.batch_size = 400;
  ok.seed = 7;
  const auto back = gad::SyntheticSpec::from_json(ok.to_json());
  EXPECT_EQ(back.to_json(), ok.to_json());
  EXPECT_THROW(gad::SyntheticSpec::from_json({{"unknown", 1}}), gad::DataQualityError);
  EXPECT_EQ(gad::SyntheticSpec::from_json(nlohmann::json::object()).batch_size, 10'000u);
}

}  // namespace
