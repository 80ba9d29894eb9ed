#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace gad {

/// Settings for EM with BIC order selection.
struct EMConfig {
  int max_components = 10;
  int restarts = 5;
  double tolerance = 1e-7;   // relative log-likelihood change
  int max_iterations = 500;
  double variance_floor = 1e-6;  // relative to each column's sample variance
  /// Stop raising the order after this many consecutive non-improving BICs.
  /// A value >= max_components scans every order.
  int bic_patience = 2;
  std::uint64_t seed = 0;
};

/// Gaussian mixture with full covariances in `Dim` dimensions
/// (Eigen::Dynamic for run-time dimension).
template <int Dim>
struct GaussianMixture {
  using Vector = Eigen::Matrix<double, Dim, 1>;
  using Matrix = Eigen::Matrix<double, Dim, Dim>;

  std::vector<double> weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  std::size_t components() const { return weights.size(); }
  Eigen::Index dim() const { return means.empty() ? 0 : means.front().size(); }
};

template <int Dim>
using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Dim>;

template <int Dim>
struct MixtureFit {
  GaussianMixture<Dim> mixture;
  double log_likelihood = 0.0;
  double bic = 0.0;
  /// All rows identical; the result is one component at the variance floor.
  bool degenerate = false;
  /// BIC per evaluated order (index L-1); orders skipped by patience are absent.
  std::vector<double> bic_by_order;
};

/// Per-row log density of the mixture; rows of `x` are points.
template <int Dim>
Eigen::VectorXd mixture_log_density(const GaussianMixture<Dim>& mixture,
                                    const SampleMatrix<Dim>& x);

/// Number of free parameters of an L-component, d-dimensional full-covariance mixture.
int mixture_parameter_count(int components, int dim);

/// EM with k-means++ seeded restarts for every order 1..max_components (capped at
/// rows/10), keeping the BIC-best model. Deterministic given config.seed.
/// Throws NumericalError when no order yields a finite likelihood.
template <int Dim>
MixtureFit<Dim> fit_mixture(const SampleMatrix<Dim>& x, const EMConfig& config);

/// Fits exactly `components` components (best of the configured restarts).
template <int Dim>
MixtureFit<Dim> fit_mixture_order(const SampleMatrix<Dim>& x, int components,
                                  const EMConfig& config);

extern template struct GaussianMixture<1>;
extern template struct GaussianMixture<2>;
extern template struct GaussianMixture<Eigen::Dynamic>;

}  // namespace gad
