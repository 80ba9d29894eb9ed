#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gad/nullmodel.hpp"
#include "gad/pvalue.hpp"

namespace gad {

/// Maximum mutual-information spanning tree over a feature subset.
struct DependenceTree {
  std::vector<std::size_t> features;  // sorted ascending
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // first < second, sorted
  std::size_t root = 0;  // smallest feature index

  /// Number of tree edges incident to `feature`.
  std::size_t degree(std::size_t feature) const;
  double total_weight(const NullModel& model) const;
};

/// Union-find with path halving and union by rank.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n);
  std::size_t find(std::size_t x);
  /// False if x and y were already connected.
  bool unite(std::size_t x, std::size_t y);

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

/// Kruskal maximum-weight spanning tree over `nodes` (any order) using
/// weight(u, v). Ties are broken by lexicographic (u, v) order on the sorted
/// node labels, so the result depends only on the node set.
std::vector<std::pair<std::size_t, std::size_t>> max_spanning_tree(
    std::span<const std::size_t> nodes,
    const std::function<double(std::size_t, std::size_t)>& weight);

/// Cluster-specific dependence tree for the features in `subset` under the
/// model's MI edge weights. A single feature yields an edgeless tree.
DependenceTree build_tree(const NullModel& model, std::span<const std::size_t> subset);

/// Root-invariant tree factorization in log space; `log_single(f)` and
/// `log_pair(a, b)` supply the first- and second-order log p-values. Edges are
/// visited in stored order, then nodes in ascending order, so any two callers
/// with the same tree produce bitwise-identical results.
template <typename SingleFn, typename PairFn>
double combine_tree_log_pvalues(const DependenceTree& tree, std::span<const double> exponents,
                                SingleFn&& log_single, PairFn&& log_pair) {
  double lp = 0.0;
  for (const auto& [a, b] : tree.edges) lp += log_pair(a, b);
  for (std::size_t i = 0; i < tree.features.size(); ++i)
    if (exponents[i] != 0.0) lp -= exponents[i] * log_single(tree.features[i]);
  return std::clamp(lp, kLogMinPValue, 0.0);
}

/// deg(v) - 1 for every feature of the tree, aligned with tree.features.
std::vector<double> tree_exponents(const DependenceTree& tree);

/// Tree-factorized joint p-value in the root-invariant form
///   prod_edges pair_p / prod_nodes singleton_p^(deg-1),
/// computed in log space and clamped to [log kMinPValue, 0].
double tree_log_joint(const DependenceTree& tree,
                      const std::function<double(std::size_t)>& log_singleton,
                      const std::function<double(std::size_t, std::size_t)>& log_pair);

/// Joint p-value of one sample row (length D) under the tree.
double joint_pvalue(const NullModel& model, const DependenceTree& tree, std::span<const double> x);

/// Same quantity from a precomputed table row.
double joint_log_pvalue(const LogPValueTable& table, const DependenceTree& tree, std::size_t row);

}  // namespace gad
