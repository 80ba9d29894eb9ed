#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gad/data.hpp"
#include "gad/deptree.hpp"
#include "gad/nullmodel.hpp"
#include "gad/pvalue.hpp"
#include "gad/report.hpp"
#include "gad/scoring.hpp"

namespace gad {

struct SearchConfig {
  std::size_t k_max = 6;
  std::size_t beam_width = 500;
  /// 0 extracts until the batch is depleted.
  std::size_t max_clusters = 0;
  std::size_t min_cluster_size = 2;
  /// Stop extracting once the best candidate's log score exceeds this value.
  std::optional<double> score_threshold;
  SubsetRule subset_rule = SubsetRule::global_prefix;
  unsigned threads = 1;
};

/// Log joint p-values of batch rows on a feature subset. Implementations must
/// be safe to call concurrently.
class CandidateEvaluator {
 public:
  virtual ~CandidateEvaluator() = default;
  virtual std::size_t dimension() const = 0;
  /// `features` is sorted ascending; out[i] receives the value for rows[i].
  virtual void log_joint(std::span<const std::size_t> features, std::span<const std::size_t> rows,
                         std::span<double> out) const = 0;
};

/// Joint p-values through a cluster-specific dependence tree built for each
/// candidate feature subset.
class DependenceTreeEvaluator final : public CandidateEvaluator {
 public:
  DependenceTreeEvaluator(const NullModel& model, const LogPValueTable& table)
      : model_(model), table_(table) {}
  std::size_t dimension() const override { return model_.dimension(); }
  void log_joint(std::span<const std::size_t> features, std::span<const std::size_t> rows,
                 std::span<double> out) const override;

 private:
  const NullModel& model_;
  const LogPValueTable& table_;
};

/// Beam search over feature subsets for the single best-scoring cluster among
/// `remaining` rows. Returns nullopt when fewer than min_cluster_size rows
/// remain. If `best_seen` is non-empty (indexed by batch row) it is lowered to
/// the smallest log joint p-value observed for each row.
std::optional<ClusterCandidate> detect_one_cluster(const CandidateEvaluator& evaluator,
                                                   std::span<const std::size_t> remaining,
                                                   const SearchConfig& config,
                                                   std::span<double> best_seen = {});

/// Convenience overload for the dependence-tree detector over a whole batch.
std::optional<ClusterCandidate> detect_one_cluster(const NullModel& model, const DataBatch& batch,
                                                   const SearchConfig& config);

/// Sequential extraction: detect the best cluster, remove its rows, repeat
/// until depletion (or max_clusters / score_threshold). Rows never detected are
/// appended in ascending order of their best observed joint p-value.
DetectionReport detect_all(const CandidateEvaluator& evaluator, std::size_t rows,
                           const SearchConfig& config);

DetectionReport detect_all(const NullModel& model, const DataBatch& batch,
                           const SearchConfig& config);

}  // namespace gad
