#include "gad/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gad/error.hpp"

namespace gad {

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n)
    throw DomainError("log_binomial: k=" + std::to_string(k) + " exceeds n=" + std::to_string(n));
  if (k == 0 || k == n) return 0.0;
  const std::size_t m = std::min(k, n - k);
  if (m <= 64) {
    // direct product keeps full precision where lgamma differences cancel
    double sum = 0.0;
    for (std::size_t i = 1; i <= m; ++i)
      sum += std::log(static_cast<double>(n - m + i) / static_cast<double>(i));
    return sum;
  }
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double log_score(std::size_t dimension, std::size_t subset_size, std::size_t batch_size,
                 std::span<const double> log_pvalues) {
  if (subset_size > dimension) throw DomainError("log_score: N_c exceeds D");
  if (log_pvalues.size() > batch_size) throw DomainError("log_score: T_c exceeds T_u");
  double sum = 0.0;
  for (double lp : log_pvalues) {
    if (!(lp <= 0.0)) throw DomainError("log_score: log p-values must be <= 0");
    sum += lp;
  }
  return log_binomial(dimension, subset_size) + log_binomial(batch_size, log_pvalues.size()) + sum;
}

SubsetSelection optimal_sample_subset(std::span<const double> log_pvalues, std::size_t dimension,
                                      std::size_t subset_size, std::size_t batch_size,
                                      const SubsetOptions& options) {
  const std::size_t n = log_pvalues.size();
  if (n == 0) throw DomainError("optimal_sample_subset: no samples");
  if (n > batch_size) throw DomainError("optimal_sample_subset: more samples than T_u");
  if (subset_size > dimension) throw DomainError("optimal_sample_subset: N_c exceeds D");
  const std::size_t min_size = std::clamp<std::size_t>(options.min_size, 1, n);

  SubsetSelection out;
  out.order.resize(n);
  std::iota(out.order.begin(), out.order.end(), std::size_t{0});
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return log_pvalues[a] < log_pvalues[b];
  });

  const double feature_term = log_binomial(dimension, subset_size);
  double p_sum = 0.0;
  double best = 0.0;
  std::size_t best_t = 0;
  double previous = 0.0;
  for (std::size_t t = 1; t <= n; ++t) {
    const double lp = log_pvalues[out.order[t - 1]];
    if (!(lp <= 0.0)) throw DomainError("optimal_sample_subset: log p-values must be <= 0");
    p_sum += lp;
    const double score = feature_term + log_binomial(batch_size, t) + p_sum;
    if (t < min_size) {
      previous = score;
      continue;
    }
    if (options.rule == SubsetRule::first_increase && t > min_size && score > previous) break;
    if (best_t == 0 || score < best) {
      best = score;
      best_t = t;
    }
    previous = score;
  }
  out.count = best_t;
  out.log_score = best;
  return out;
}

}  // namespace gad
