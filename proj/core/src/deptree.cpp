#include "gad/deptree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "gad/error.hpp"

namespace gad {

std::size_t DependenceTree::degree(std::size_t feature) const {
  std::size_t d = 0;
  for (const auto& [a, b] : edges) d += (a == feature) + (b == feature);
  return d;
}

double DependenceTree::total_weight(const NullModel& model) const {
  double w = 0.0;
  for (const auto& [a, b] : edges) w += model.mutual_information(a, b);
  return w;
}

DisjointSet::DisjointSet(std::size_t n) : parent_(n), rank_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), std::size_t{0});
}

std::size_t DisjointSet::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool DisjointSet::unite(std::size_t x, std::size_t y) {
  x = find(x);
  y = find(y);
  if (x == y) return false;
  if (rank_[x] < rank_[y]) std::swap(x, y);
  parent_[y] = x;
  if (rank_[x] == rank_[y]) ++rank_[x];
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> max_spanning_tree(
    std::span<const std::size_t> nodes,
    const std::function<double(std::size_t, std::size_t)>& weight) {
  std::vector<std::size_t> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t n = sorted.size();

  struct Edge {
    double w;
    std::size_t a, b;  // positions in `sorted`
  };
  std::vector<Edge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) edges.push_back({weight(sorted[a], sorted[b]), a, b});
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.w > y.w; });

  DisjointSet sets(n);
  std::vector<std::pair<std::size_t, std::size_t>> tree;
  tree.reserve(n > 0 ? n - 1 : 0);
  for (const Edge& e : edges) {
    if (tree.size() + 1 >= n) break;
    if (sets.unite(e.a, e.b)) tree.emplace_back(sorted[e.a], sorted[e.b]);
  }
  std::sort(tree.begin(), tree.end());
  return tree;
}

DependenceTree build_tree(const NullModel& model, std::span<const std::size_t> subset) {
  if (subset.empty()) throw DomainError("build_tree: feature subset is empty");
  DependenceTree tree;
  tree.features.assign(subset.begin(), subset.end());
  std::sort(tree.features.begin(), tree.features.end());
  if (std::adjacent_find(tree.features.begin(), tree.features.end()) != tree.features.end())
    throw DomainError("build_tree: feature subset has duplicates");
  if (tree.features.back() >= model.dimension())
    throw DomainError("build_tree: feature index out of range");
  tree.root = tree.features.front();
  tree.edges = max_spanning_tree(tree.features, [&](std::size_t a, std::size_t b) {
    return model.mutual_information(a, b);
  });
  return tree;
}

std::vector<double> tree_exponents(const DependenceTree& tree) {
  std::vector<double> out;
  out.reserve(tree.features.size());
  for (std::size_t f : tree.features) out.push_back(static_cast<double>(tree.degree(f)) - 1.0);
  return out;
}

double tree_log_joint(const DependenceTree& tree,
                      const std::function<double(std::size_t)>& log_singleton,
                      const std::function<double(std::size_t, std::size_t)>& log_pair) {
  return combine_tree_log_pvalues(tree, tree_exponents(tree), log_singleton, log_pair);
}

double joint_pvalue(const NullModel& model, const DependenceTree& tree,
                    std::span<const double> x) {
  if (x.size() != model.dimension())
    throw DomainError("joint_pvalue: sample width does not match the model dimension");
  // One- and two-node trees reduce to the singleton and pair p-values; return
  // them directly rather than through exp(log(p)).
  if (tree.features.size() == 1)
    return singleton_pvalue(model.univariate(tree.root), x[tree.root]);
  if (tree.features.size() == 2) {
    const auto [a, b] = tree.edges.front();
    return pair_pvalue(model.bivariate(a, b), {x[a], x[b]});
  }
  const double lp = tree_log_joint(
      tree, [&](std::size_t f) { return std::log(singleton_pvalue(model.univariate(f), x[f])); },
      [&](std::size_t a, std::size_t b) {
        return std::log(pair_pvalue(model.bivariate(a, b), {x[a], x[b]}));
      });
  return std::exp(lp);
}

double joint_log_pvalue(const LogPValueTable& table, const DependenceTree& tree, std::size_t row) {
  return tree_log_joint(
      tree, [&](std::size_t f) { return table.singleton(row, f); },
      [&](std::size_t a, std::size_t b) { return table.pair(row, a, b); });
}

}  // namespace gad
