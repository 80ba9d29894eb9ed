#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "gad/data.hpp"
#include "gad/deptree.hpp"
#include "gad/mixture.hpp"
#include "gad/nullmodel.hpp"
#include "gad/pvalue.hpp"
#include "gad/search.hpp"

namespace gad {

enum class BaselineKind { gmm_likelihood, independence_tests, single_bayes_net };

std::string_view to_string(BaselineKind kind);

/// Which p-values the independence baseline multiplies.
enum class IndependenceMode {
  /// Every unordered feature pair of the subset (a single feature uses its singleton).
  pairwise,
  /// Every singleton of the subset.
  singleton,
};

/// Joint p-value treating the tests of a feature subset as independent.
/// `features` must be non-empty; `x` is a full sample row.
double independence_score(const NullModel& model, std::span<const std::size_t> features,
                          std::span<const double> x,
                          IndependenceMode mode = IndependenceMode::pairwise);

/// Dependence tree over all features of the model, built once.
DependenceTree global_tree(const NullModel& model);

/// Joint p-value under the global tree restricted to `features`: the product of
/// the tree-factorized p-values of the induced forest's components, with
/// isolated features contributing their singleton p-values.
double single_bn_score(const NullModel& model, const DependenceTree& global,
                       std::span<const std::size_t> features, std::span<const double> x);

/// Connected components of the global tree restricted to `features`, each as
/// a dependence tree with the induced edges.
std::vector<DependenceTree> induced_forest(const DependenceTree& global,
                                           std::span<const std::size_t> features);

class IndependenceEvaluator final : public CandidateEvaluator {
 public:
  IndependenceEvaluator(const LogPValueTable& table,
                        IndependenceMode mode = IndependenceMode::pairwise)
      : table_(table), mode_(mode) {}
  std::size_t dimension() const override { return table_.dimension(); }
  void log_joint(std::span<const std::size_t> features, std::span<const std::size_t> rows,
                 std::span<double> out) const override;

 private:
  const LogPValueTable& table_;
  IndependenceMode mode_;
};

class SingleBnEvaluator final : public CandidateEvaluator {
 public:
  SingleBnEvaluator(const NullModel& model, const LogPValueTable& table)
      : global_(global_tree(model)), table_(table) {}
  std::size_t dimension() const override { return table_.dimension(); }
  void log_joint(std::span<const std::size_t> features, std::span<const std::size_t> rows,
                 std::span<double> out) const override;
  const DependenceTree& tree() const { return global_; }

 private:
  DependenceTree global_;
  const LogPValueTable& table_;
};

/// Fits one full-dimensional mixture on `train` and ranks `test` rows by
/// ascending log-likelihood (ties by row index).
std::vector<std::size_t> gmm_likelihood_rank(const DataBatch& train, const DataBatch& test,
                                             const EMConfig& config);

/// Runs the independence baseline through the shared search and extraction.
DetectionReport detect_independence(const NullModel& model, const DataBatch& batch,
                                    const SearchConfig& config,
                                    IndependenceMode mode = IndependenceMode::pairwise);

/// Runs the single-tree baseline through the shared search and extraction.
DetectionReport detect_single_bn(const NullModel& model, const DataBatch& batch,
                                 const SearchConfig& config);

/// Ranking-only report of the full-dimensional mixture baseline.
DetectionReport detect_gmm(const DataBatch& train, const DataBatch& test, const EMConfig& config);

}  // namespace gad
