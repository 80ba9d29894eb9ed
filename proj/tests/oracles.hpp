#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library code they are used to check.

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "gad/flowfeat.hpp"
#include "gad/nullmodel.hpp"

namespace oracle {

inline double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// P(U > h, V > k) for a standard bivariate normal, by adaptive quadrature of
/// phi(x) * P(V > k | U = x) over x in (h, inf).
inline double bvn_upper(double h, double k, double rho) {
  if (rho == 0.0) return Phi(-h) * Phi(-k);
  const double s = std::sqrt(1.0 - rho * rho);
  auto f = [&](double x) { return phi(x) * Phi((rho * x - k) / s); };
  // Split at the origin when h is negative so both pieces are smooth tails.
  boost::math::quadrature::exp_sinh<double> upper;
  if (h >= 0.0) return upper.integrate([&](double t) { return f(h + t); });
  boost::math::quadrature::tanh_sinh<double> finite;
  return finite.integrate(f, h, 0.0) + upper.integrate(f);
}

/// Bivariate normal density of one mixture component.
inline double bvn_density(const std::array<double, 2>& mean, const gad::Covariance2& c, double x0,
                          double x1) {
  const double det = c.xx * c.yy - c.xy * c.xy;
  const double d0 = x0 - mean[0], d1 = x1 - mean[1];
  const double q = (c.yy * d0 * d0 - 2.0 * c.xy * d0 * d1 + c.xx * d1 * d1) / det;
  return std::exp(-0.5 * q) / (2.0 * M_PI * std::sqrt(det));
}

struct MonteCarlo {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// Monte-Carlo estimate of the mixture corner mass: for each component, the
/// fraction of draws at least as far from the component mean on both axes as
/// x, weighted by the posterior of x.
inline MonteCarlo corner_mass(const gad::BivariateGMM& m, std::array<double, 2> x, std::size_t n,
                              std::uint64_t seed) {
  const std::size_t L = m.weights.size();
  std::vector<double> post(L);
  double total = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    total += post[l] = m.weights[l] * bvn_density(m.means[l], m.covariances[l], x[0], x[1]);
  for (double& p : post) p /= total;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  MonteCarlo out;
  double var = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    const auto& c = m.covariances[l];
    const double a = std::sqrt(c.xx);
    const double b = c.xy / a;
    const double d = std::sqrt(c.yy - b * b);
    const double t0 = std::abs(x[0] - m.means[l][0]);
    const double t1 = std::abs(x[1] - m.means[l][1]);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double z0 = z(rng), z1 = z(rng);
      const double u = a * z0, v = b * z0 + d * z1;
      if (std::abs(u) >= t0 && std::abs(v) >= t1) ++hits;
    }
    const double f = static_cast<double>(hits) / static_cast<double>(n);
    out.estimate += post[l] * f;
    // add-one proportion keeps the variance estimate honest when hits are rare or zero
    const double g = (static_cast<double>(hits) + 1.0) / (static_cast<double>(n) + 2.0);
    var += post[l] * post[l] * g * (1.0 - g) / static_cast<double>(n);
  }
  out.standard_error = std::sqrt(var);
  return out;
}

/// Maximum-weight spanning tree by enumerating every labelled tree on the
/// given nodes through Prufer sequences. Returns the edge set (as sorted
/// node-label pairs) and its weight.
inline std::pair<std::set<std::pair<std::size_t, std::size_t>>, double> brute_force_mst(
    const std::vector<std::size_t>& nodes,
    const std::function<double(std::size_t, std::size_t)>& weight) {
  const std::size_t n = nodes.size();
  std::set<std::pair<std::size_t, std::size_t>> best;
  double best_w = -std::numeric_limits<double>::infinity();
  auto label = [&](std::size_t a, std::size_t b) {
    return std::minmax(nodes[a], nodes[b]);
  };
  if (n < 2) return {best, 0.0};
  if (n == 2) return {{label(0, 1)}, weight(label(0, 1).first, label(0, 1).second)};
  std::vector<std::size_t> seq(n - 2, 0);
  for (;;) {
    std::vector<std::size_t> degree(n, 1);
    for (std::size_t s : seq) ++degree[s];
    std::set<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.insert(label(leaf, s));
      --degree[leaf];
      --degree[s];
    }
    std::vector<std::size_t> last;
    for (std::size_t v = 0; v < n; ++v)
      if (degree[v] == 1) last.push_back(v);
    edges.insert(label(last[0], last[1]));
    double w = 0.0;
    for (const auto& [a, b] : edges) w += weight(a, b);
    if (w > best_w) {
      best_w = w;
      best = edges;
    }
    std::size_t i = 0;
    while (i < seq.size() && ++seq[i] == n) seq[i++] = 0;
    if (i == seq.size()) break;
  }
  return {best, best_w};
}

/// ln C(n, k) with exact integer arithmetic.
inline double exact_log_binomial(std::size_t n, std::size_t k) {
  using boost::multiprecision::cpp_int;
  cpp_int c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return static_cast<double>(log(boost::multiprecision::cpp_bin_float_100(c)));
}

/// The Bonferroni score ln[C(D,N) C(T,Tc) prod p] with the product formed
/// exactly: every double p is an exact binary rational.
inline double exact_log_score(std::size_t D, std::size_t N, std::size_t T,
                              const std::vector<double>& pvalues) {
  using boost::multiprecision::cpp_bin_float_100;
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  auto binom = [](std::size_t n, std::size_t k) {
    cpp_int c = 1;
    for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };
  cpp_rational product = cpp_rational(binom(D, N) * binom(T, pvalues.size()));
  for (double p : pvalues) {
    int e = 0;
    const double m = std::frexp(p, &e);  // p = m * 2^e, m in [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    cpp_rational r(mant);
    const int shift = e - 53;
    if (shift >= 0)
      r *= cpp_rational(cpp_int(1) << shift);
    else
      r /= cpp_rational(cpp_int(1) << -shift);
    product *= r;
  }
  const cpp_bin_float_100 num(numerator(product));
  const cpp_bin_float_100 den(denominator(product));
  return static_cast<double>(log(num) - log(den));
}

/// Minimum over every sample subset of size >= min_size of
/// ln C(D,N) + ln C(T,|I|) + sum_{i in I} lp_i, by enumeration of all 2^T subsets.
inline double exhaustive_subset_min(const std::vector<double>& lp, std::size_t D, std::size_t N,
                                    std::size_t min_size) {
  const std::size_t T = lp.size();
  double best = std::numeric_limits<double>::infinity();
  auto lbin = [](double n, double k) {
    return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
  };
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << T); ++mask) {
    const auto size = static_cast<std::size_t>(std::popcount(mask));
    if (size < min_size) continue;
    double s = lbin(static_cast<double>(D), static_cast<double>(N)) +
               lbin(static_cast<double>(T), static_cast<double>(size));
    for (std::size_t i = 0; i < T; ++i)
      if (mask >> i & 1U) s += lp[i];
    best = std::min(best, s);
  }
  return best;
}

/// AUC as the fraction of (positive, negative) pairs with the positive ranked first.
inline double concordant_auc(const std::vector<std::size_t>& ranked,
                             const std::vector<bool>& positive) {
  std::vector<std::size_t> position(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) position[ranked[i]] = i;
  double good = 0.0, total = 0.0;
  for (std::size_t a = 0; a < positive.size(); ++a)
    for (std::size_t b = 0; b < positive.size(); ++b)
      if (positive[a] && !positive[b]) {
        total += 1.0;
        good += position[a] < position[b] ? 1.0 : 0.0;
      }
  return good / total;
}

/// Kolmogorov-Smirnov statistic of a sample against U(0, 1).
inline double ks_uniform(std::vector<double> x) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    d = std::max({d, static_cast<double>(i + 1) / n - x[i], x[i] - static_cast<double>(i) / n});
  return d;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

/// Asymptotic two-sample KS p-value (Kolmogorov distribution).
inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * m / (n + m);
  const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k)
    sum += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(sum, 0.0, 1.0);
}

/// Flow slotting written as a token stream: each packet becomes [0,] size, where
/// the zero appears when its direction differs from the slot parity reached so
/// far; the stream is cut and padded to 2N.
inline std::vector<double> reference_slots(const std::vector<gad::Packet>& packets, std::size_t n,
                                           gad::Direction lead) {
  std::vector<double> tokens;
  for (std::size_t i = 0; i < packets.size() && i < n; ++i) {
    const bool slot_is_lead = tokens.size() % 2 == 0;
    const bool packet_is_lead = packets[i].direction == lead;
    if (slot_is_lead != packet_is_lead) tokens.push_back(0.0);
    tokens.push_back(static_cast<double>(packets[i].size));
  }
  tokens.resize(2 * n, 0.0);
  return tokens;
}

}  // namespace oracle
