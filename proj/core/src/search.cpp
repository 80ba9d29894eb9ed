#include "gad/search.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>

#include "gad/error.hpp"
#include "gad/parallel.hpp"

namespace gad {

void DependenceTreeEvaluator::log_joint(std::span<const std::size_t> features,
                                        std::span<const std::size_t> rows,
                                        std::span<double> out) const {
  const DependenceTree tree = build_tree(model_, features);
  const std::vector<double> exponents = tree_exponents(tree);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    out[i] = combine_tree_log_pvalues(
        tree, exponents, [&](std::size_t f) { return table_.singleton(r, f); },
        [&](std::size_t a, std::size_t b) { return table_.pair(r, a, b); });
  }
}

namespace {

struct Scored {
  std::vector<std::size_t> features;
  double log_score = 0.0;
};

bool better(const Scored& a, const Scored& b) {
  return std::tie(a.log_score, a.features) < std::tie(b.log_score, b.features);
}

void validate(const SearchConfig& config, std::size_t dimension) {
  if (dimension == 0) throw DomainError("search requires at least one feature");
  if (config.k_max == 0) throw DomainError("k_max must be at least 1");
  if (config.beam_width == 0) throw DomainError("beam_width must be at least 1");
  if (config.min_cluster_size == 0) throw DomainError("min_cluster_size must be at least 1");
}

}  // namespace

std::optional<ClusterCandidate> detect_one_cluster(const CandidateEvaluator& evaluator,
                                                   std::span<const std::size_t> remaining,
                                                   const SearchConfig& config,
                                                   std::span<double> best_seen) {
  const std::size_t dimension = evaluator.dimension();
  validate(config, dimension);
  const std::size_t n = remaining.size();
  if (n == 0 || n < config.min_cluster_size) return std::nullopt;

  const std::size_t k_max = std::min(config.k_max, dimension);
  const SubsetOptions subset_options{config.min_cluster_size, config.subset_rule};
  std::mutex seen_mutex;

  auto evaluate = [&](std::span<const std::size_t> features) {
    std::vector<double> lp(n);
    evaluator.log_joint(features, remaining, lp);
    if (!best_seen.empty()) {
      std::lock_guard lock(seen_mutex);
      for (std::size_t i = 0; i < n; ++i) {
        double& slot = best_seen[remaining[i]];
        slot = std::min(slot, lp[i]);
      }
    }
    return optimal_sample_subset(lp, dimension, features.size(), n, subset_options).log_score;
  };

  std::vector<OrderBest> order_best;
  std::optional<Scored> winner;
  std::vector<Scored> previous;

  for (std::size_t order = 1; order <= k_max; ++order) {
    std::vector<std::vector<std::size_t>> candidates;
    if (order == 1) {
      for (std::size_t f = 0; f < dimension; ++f) candidates.push_back({f});
    } else {
      std::set<std::vector<std::size_t>> unique;
      const std::size_t beam = std::min(config.beam_width, previous.size());
      for (std::size_t b = 0; b < beam; ++b) {
        const auto& base = previous[b].features;
        for (std::size_t f = 0; f < dimension; ++f) {
          if (std::binary_search(base.begin(), base.end(), f)) continue;
          std::vector<std::size_t> grown = base;
          grown.insert(std::upper_bound(grown.begin(), grown.end(), f), f);
          unique.insert(std::move(grown));
        }
      }
      candidates.assign(unique.begin(), unique.end());
    }
    if (candidates.empty()) break;

    std::vector<Scored> scored(candidates.size());
    parallel_for(candidates.size(), config.threads, [&](std::size_t c) {
      scored[c] = {candidates[c], evaluate(candidates[c])};
    });
    std::sort(scored.begin(), scored.end(), better);

    order_best.push_back({order, scored.front().features, scored.front().log_score});
    if (!winner || scored.front().log_score < winner->log_score) winner = scored.front();
    previous = std::move(scored);
  }

  std::vector<double> lp(n);
  evaluator.log_joint(winner->features, remaining, lp);
  const SubsetSelection selection = optimal_sample_subset(
      lp, dimension, winner->features.size(), n, subset_options);

  ClusterCandidate result;
  result.features = winner->features;
  result.log_score = selection.log_score;
  result.order_best = std::move(order_best);
  result.samples.reserve(selection.count);
  result.per_sample_log_p.reserve(selection.count);
  for (std::size_t pos : selection.selected()) {
    result.samples.push_back(remaining[pos]);
    result.per_sample_log_p.push_back(lp[pos]);
  }
  return result;
}

std::optional<ClusterCandidate> detect_one_cluster(const NullModel& model, const DataBatch& batch,
                                                   const SearchConfig& config) {
  const LogPValueTable table(model, batch, config.threads);
  const DependenceTreeEvaluator evaluator(model, table);
  std::vector<std::size_t> rows(batch.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return detect_one_cluster(evaluator, rows, config);
}

DetectionReport detect_all(const CandidateEvaluator& evaluator, std::size_t rows,
                           const SearchConfig& config) {
  validate(config, evaluator.dimension());
  DetectionReport report;
  report.method = "proposed";

  std::vector<double> best_seen(rows, 0.0);
  std::vector<char> detected(rows, 0);
  std::vector<std::size_t> remaining(rows);
  std::iota(remaining.begin(), remaining.end(), std::size_t{0});

  while (config.max_clusters == 0 || report.clusters.size() < config.max_clusters) {
    auto cluster = detect_one_cluster(evaluator, remaining, config, best_seen);
    if (!cluster) break;
    if (config.score_threshold && cluster->log_score > *config.score_threshold) break;
    for (std::size_t r : cluster->samples) {
      detected[r] = 1;
      report.ranked_samples.push_back(r);
    }
    std::erase_if(remaining, [&](std::size_t r) { return detected[r] != 0; });
    report.clusters.push_back(std::move(*cluster));
  }

  std::vector<std::size_t> tail;
  for (std::size_t r = 0; r < rows; ++r)
    if (!detected[r]) tail.push_back(r);
  std::sort(tail.begin(), tail.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(best_seen[a], a) < std::tie(best_seen[b], b);
  });
  report.ranked_samples.insert(report.ranked_samples.end(), tail.begin(), tail.end());
  return report;
}

DetectionReport detect_all(const NullModel& model, const DataBatch& batch,
                           const SearchConfig& config) {
  const LogPValueTable table(model, batch, config.threads);
  const DependenceTreeEvaluator evaluator(model, table);
  DetectionReport report = detect_all(evaluator, batch.rows(), config);
  report.sample_ids.reserve(batch.rows());
  for (std::size_t r = 0; r < batch.rows(); ++r) report.sample_ids.push_back(batch.id(r));
  return report;
}

}  // namespace gad
