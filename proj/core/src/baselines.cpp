#include "gad/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "gad/error.hpp"

namespace gad {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::gmm_likelihood: return "gmm";
    case BaselineKind::independence_tests: return "independence";
    case BaselineKind::single_bayes_net: return "single_bn";
  }
  return "unknown";
}

namespace {

template <typename SingleFn, typename PairFn>
double independence_log(std::span<const std::size_t> features, IndependenceMode mode,
                        SingleFn&& log_single, PairFn&& log_pair) {
  double lp = 0.0;
  if (mode == IndependenceMode::singleton || features.size() == 1) {
    for (std::size_t f : features) lp += log_single(f);
  } else {
    for (std::size_t a = 0; a < features.size(); ++a)
      for (std::size_t b = a + 1; b < features.size(); ++b)
        lp += log_pair(features[a], features[b]);
  }
  return std::clamp(lp, kLogMinPValue, 0.0);
}

struct ForestPlan {
  std::vector<DependenceTree> components;
  std::vector<std::vector<double>> exponents;
};

ForestPlan plan_forest(const DependenceTree& global, std::span<const std::size_t> features) {
  ForestPlan plan;
  plan.components = induced_forest(global, features);
  for (const auto& c : plan.components) plan.exponents.push_back(tree_exponents(c));
  return plan;
}

template <typename SingleFn, typename PairFn>
double forest_log(const ForestPlan& plan, SingleFn&& log_single, PairFn&& log_pair) {
  double lp = 0.0;
  for (std::size_t c = 0; c < plan.components.size(); ++c)
    lp += combine_tree_log_pvalues(plan.components[c], plan.exponents[c], log_single, log_pair);
  return std::clamp(lp, kLogMinPValue, 0.0);
}

std::vector<std::size_t> checked_features(std::span<const std::size_t> features,
                                          std::size_t dimension) {
  if (features.empty()) throw DomainError("feature subset must be non-empty");
  std::vector<std::size_t> sorted(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("feature subset contains duplicates");
  if (sorted.back() >= dimension) throw DomainError("feature index out of range");
  return sorted;
}

}  // namespace

double independence_score(const NullModel& model, std::span<const std::size_t> features,
                          std::span<const double> x, IndependenceMode mode) {
  const auto sorted = checked_features(features, model.dimension());
  if (x.size() != model.dimension())
    throw DomainError("independence_score: sample width does not match the model dimension");
  if (sorted.size() == 1) return singleton_pvalue(model.univariate(sorted[0]), x[sorted[0]]);
  if (sorted.size() == 2 && mode == IndependenceMode::pairwise)
    return pair_pvalue(model.bivariate(sorted[0], sorted[1]), {x[sorted[0]], x[sorted[1]]});
  return std::exp(independence_log(
      sorted, mode,
      [&](std::size_t f) { return std::log(singleton_pvalue(model.univariate(f), x[f])); },
      [&](std::size_t a, std::size_t b) {
        return std::log(pair_pvalue(model.bivariate(a, b), {x[a], x[b]}));
      }));
}

DependenceTree global_tree(const NullModel& model) {
  std::vector<std::size_t> all(model.dimension());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return build_tree(model, all);
}

std::vector<DependenceTree> induced_forest(const DependenceTree& global,
                                           std::span<const std::size_t> features) {
  std::vector<std::size_t> sorted(features.begin(), features.end());
  std::sort(sorted.begin(), sorted.end());
  auto local = [&](std::size_t f) {
    return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), f) -
                                    sorted.begin());
  };
  auto contains = [&](std::size_t f) { return std::binary_search(sorted.begin(), sorted.end(), f); };

  std::vector<std::pair<std::size_t, std::size_t>> kept;
  DisjointSet sets(sorted.size());
  for (const auto& e : global.edges) {
    if (contains(e.first) && contains(e.second)) {
      kept.push_back(e);
      sets.unite(local(e.first), local(e.second));
    }
  }

  // Components ordered by their smallest feature; edges keep global order.
  std::vector<std::size_t> component_of(sorted.size());
  std::vector<std::size_t> root_slot(sorted.size(), sorted.size());
  std::vector<DependenceTree> forest;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t r = sets.find(i);
    if (root_slot[r] == sorted.size()) {
      root_slot[r] = forest.size();
      forest.emplace_back();
      forest.back().root = sorted[i];
    }
    component_of[i] = root_slot[r];
    forest[component_of[i]].features.push_back(sorted[i]);
  }
  for (const auto& e : kept) forest[component_of[local(e.first)]].edges.push_back(e);
  return forest;
}

double single_bn_score(const NullModel& model, const DependenceTree& global,
                       std::span<const std::size_t> features, std::span<const double> x) {
  const auto sorted = checked_features(features, model.dimension());
  if (x.size() != model.dimension())
    throw DomainError("single_bn_score: sample width does not match the model dimension");
  const ForestPlan plan = plan_forest(global, sorted);
  if (plan.components.size() == 1) return joint_pvalue(model, plan.components.front(), x);
  return std::exp(forest_log(
      plan, [&](std::size_t f) { return std::log(singleton_pvalue(model.univariate(f), x[f])); },
      [&](std::size_t a, std::size_t b) {
        return std::log(pair_pvalue(model.bivariate(a, b), {x[a], x[b]}));
      }));
}

void IndependenceEvaluator::log_joint(std::span<const std::size_t> features,
                                      std::span<const std::size_t> rows,
                                      std::span<double> out) const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    out[i] = independence_log(
        features, mode_, [&](std::size_t f) { return table_.singleton(r, f); },
        [&](std::size_t a, std::size_t b) { return table_.pair(r, a, b); });
  }
}

void SingleBnEvaluator::log_joint(std::span<const std::size_t> features,
                                  std::span<const std::size_t> rows,
                                  std::span<double> out) const {
  const ForestPlan plan = plan_forest(global_, features);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    out[i] = forest_log(
        plan, [&](std::size_t f) { return table_.singleton(r, f); },
        [&](std::size_t a, std::size_t b) { return table_.pair(r, a, b); });
  }
}

std::vector<std::size_t> gmm_likelihood_rank(const DataBatch& train, const DataBatch& test,
                                             const EMConfig& config) {
  if (train.cols() != test.cols())
    throw DataQualityError("train and test batches have different feature counts");
  if (train.cols() == 0) throw DataQualityError("batches have no features");
  train.require_finite();
  test.require_finite();

  using Rows = SampleMatrix<Eigen::Dynamic>;
  auto to_matrix = [](const DataBatch& b) {
    Rows m(static_cast<Eigen::Index>(b.rows()), static_cast<Eigen::Index>(b.cols()));
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b.at(i, j);
    return m;
  };
  const auto fit = fit_mixture<Eigen::Dynamic>(to_matrix(train), config);
  const Eigen::VectorXd ll = mixture_log_density(fit.mixture, to_matrix(test));

  std::vector<std::size_t> order(test.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double la = ll(static_cast<Eigen::Index>(a));
    const double lb = ll(static_cast<Eigen::Index>(b));
    return std::tie(la, a) < std::tie(lb, b);
  });
  return order;
}

namespace {

void attach_ids(DetectionReport& report, const DataBatch& batch) {
  report.sample_ids.clear();
  for (std::size_t r = 0; r < batch.rows(); ++r) report.sample_ids.push_back(batch.id(r));
}

}  // namespace

DetectionReport detect_independence(const NullModel& model, const DataBatch& batch,
                                    const SearchConfig& config, IndependenceMode mode) {
  const LogPValueTable table(model, batch, config.threads);
  const IndependenceEvaluator evaluator(table, mode);
  DetectionReport report = detect_all(evaluator, batch.rows(), config);
  report.method = std::string(to_string(BaselineKind::independence_tests));
  attach_ids(report, batch);
  return report;
}

DetectionReport detect_single_bn(const NullModel& model, const DataBatch& batch,
                                 const SearchConfig& config) {
  const LogPValueTable table(model, batch, config.threads);
  const SingleBnEvaluator evaluator(model, table);
  DetectionReport report = detect_all(evaluator, batch.rows(), config);
  report.method = std::string(to_string(BaselineKind::single_bayes_net));
  attach_ids(report, batch);
  return report;
}

DetectionReport detect_gmm(const DataBatch& train, const DataBatch& test, const EMConfig& config) {
  DetectionReport report;
  report.method = std::string(to_string(BaselineKind::gmm_likelihood));
  report.ranked_samples = gmm_likelihood_rank(train, test, config);
  attach_ids(report, test);
  return report;
}

}  // namespace gad
