#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gad {

/// ln C(n, k) via log-gamma. Throws DomainError if k > n.
double log_binomial(std::size_t n, std::size_t k);

/// Bonferroni-corrected joint score in natural-log form:
///   ln C(D, N_c) + ln C(T_u, T_c) + sum(log_pvalues),  T_c = log_pvalues.size().
/// Throws DomainError when N_c > D, T_c > T_u, or any log p-value is positive.
double log_score(std::size_t dimension, std::size_t subset_size, std::size_t batch_size,
                 std::span<const double> log_pvalues);

enum class SubsetRule {
  /// Argmin of the score over every prefix of the sorted list.
  global_prefix,
  /// Include samples in sorted order until the score stops decreasing.
  first_increase,
};

struct SubsetSelection {
  /// Positions into the input sorted by ascending log p-value (ties by position).
  std::vector<std::size_t> order;
  /// Number of leading entries of `order` that form the selected subset.
  std::size_t count = 0;
  double log_score = 0.0;

  std::span<const std::size_t> selected() const { return {order.data(), count}; }
};

struct SubsetOptions {
  std::size_t min_size = 1;
  SubsetRule rule = SubsetRule::global_prefix;
};

/// Sample subset minimizing the score for a fixed feature subset. With
/// `global_prefix` every prefix length from min_size up is scanned and the
/// smallest score wins; equal scores keep the shorter prefix.
SubsetSelection optimal_sample_subset(std::span<const double> log_pvalues, std::size_t dimension,
                                      std::size_t subset_size, std::size_t batch_size,
                                      const SubsetOptions& options = {});

}  // namespace gad
