#include "gad/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Cholesky>

#include "gad/error.hpp"
#include "gad/normal.hpp"
#include "gad/random.hpp"

namespace gad {

template struct GaussianMixture<1>;
template struct GaussianMixture<2>;
template struct GaussianMixture<Eigen::Dynamic>;

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;

template <int Dim>
using Vec = typename GaussianMixture<Dim>::Vector;
template <int Dim>
using Mat = typename GaussianMixture<Dim>::Matrix;

/// Column-wise variance floor; a constant column falls back to the absolute floor.
Eigen::VectorXd variance_floor(const Eigen::MatrixXd& x, double relative) {
  const Eigen::Index d = x.cols();
  Eigen::VectorXd floor(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().mean();
    floor(j) = var > 0.0 ? relative * var : relative;
  }
  return floor;
}

template <int Dim>
void regularize(Mat<Dim>& cov, const Eigen::VectorXd& floor) {
  if (cov.rows() == 1) {
    cov(0, 0) = std::max(cov(0, 0), floor(0));
    return;
  }
  cov = 0.5 * (cov + cov.transpose()).eval();
  for (Eigen::Index j = 0; j < cov.rows(); ++j) cov(j, j) += floor(j);
}

/// T×L matrix of log(w_l) + log N(x_t; mu_l, Sigma_l). Returns false if a
/// covariance is not positive definite.
template <int Dim>
bool component_log_terms(const GaussianMixture<Dim>& m, const SampleMatrix<Dim>& x,
                         Eigen::MatrixXd& out) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  out.resize(n, static_cast<Eigen::Index>(m.components()));
  for (std::size_t l = 0; l < m.components(); ++l) {
    Eigen::LLT<Mat<Dim>> llt(m.covariances[l]);
    if (llt.info() != Eigen::Success) return false;
    const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    Eigen::Matrix<double, Dim, Eigen::Dynamic> diff =
        (x.rowwise() - m.means[l].transpose()).transpose();
    llt.matrixL().solveInPlace(diff);
    const double base = std::log(m.weights[l]) - 0.5 * (static_cast<double>(d) * kLog2Pi + log_det);
    out.col(static_cast<Eigen::Index>(l)) =
        (base - 0.5 * diff.colwise().squaredNorm().array()).matrix().transpose();
  }
  return true;
}

Eigen::VectorXd row_log_sum_exp(const Eigen::MatrixXd& terms) {
  Eigen::VectorXd out(terms.rows());
  for (Eigen::Index t = 0; t < terms.rows(); ++t) {
    const double mx = terms.row(t).maxCoeff();
    if (!std::isfinite(mx)) {
      out(t) = mx;
      continue;
    }
    out(t) = mx + std::log((terms.row(t).array() - mx).exp().sum());
  }
  return out;
}

template <int Dim>
struct RunResult {
  GaussianMixture<Dim> mixture;
  double log_likelihood = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

template <int Dim>
Mat<Dim> weighted_covariance(const SampleMatrix<Dim>& x, const Vec<Dim>& mean,
                             const Eigen::VectorXd& w, double total) {
  const SampleMatrix<Dim> diff = x.rowwise() - mean.transpose();
  Mat<Dim> cov = (diff.array().colwise() * w.array()).matrix().transpose() * diff;
  return cov / total;
}

template <int Dim>
RunResult<Dim> single_component(const SampleMatrix<Dim>& x, const Eigen::VectorXd& floor) {
  RunResult<Dim> r;
  const double n = static_cast<double>(x.rows());
  Vec<Dim> mean = x.colwise().mean().transpose();
  Mat<Dim> cov = weighted_covariance<Dim>(x, mean, Eigen::VectorXd::Ones(x.rows()), n);
  regularize<Dim>(cov, floor);
  r.mixture.weights = {1.0};
  r.mixture.means = {mean};
  r.mixture.covariances = {cov};
  Eigen::MatrixXd terms;
  if (!component_log_terms(r.mixture, x, terms)) return r;
  r.log_likelihood = terms.col(0).sum();
  r.ok = std::isfinite(r.log_likelihood);
  return r;
}

/// k-means++ seeding of `k` centres from the rows of x.
template <int Dim>
std::vector<Vec<Dim>> seed_means(const SampleMatrix<Dim>& x, int k, std::mt19937_64& rng) {
  const Eigen::Index n = x.rows();
  std::vector<Vec<Dim>> centres;
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  centres.push_back(x.row(pick(rng)).transpose());
  Eigen::VectorXd dist2 = (x.rowwise() - centres[0].transpose()).rowwise().squaredNorm();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(centres.size()) < k) {
    const double total = dist2.sum();
    Eigen::Index chosen = pick(rng);
    if (total > 0.0) {
      double target = unit(rng) * total;
      for (Eigen::Index t = 0; t < n; ++t) {
        target -= dist2(t);
        if (target <= 0.0) {
          chosen = t;
          break;
        }
      }
    }
    centres.push_back(x.row(chosen).transpose());
    dist2 = dist2.cwiseMin((x.rowwise() - centres.back().transpose()).rowwise().squaredNorm());
  }
  return centres;
}

template <int Dim>
RunResult<Dim> run_em(const SampleMatrix<Dim>& x, int k, const Mat<Dim>& global_cov,
                      const Eigen::VectorXd& floor, const EMConfig& config, std::mt19937_64& rng) {
  RunResult<Dim> r;
  GaussianMixture<Dim>& m = r.mixture;
  m.means = seed_means<Dim>(x, k, rng);
  m.weights.assign(k, 1.0 / k);
  m.covariances.assign(k, global_cov);

  const Eigen::Index n = x.rows();
  Eigen::MatrixXd terms;
  double previous = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    if (!component_log_terms(m, x, terms)) return r;
    const Eigen::VectorXd lse = row_log_sum_exp(terms);
    const double ll = lse.sum();
    if (!std::isfinite(ll)) return r;
    r.log_likelihood = ll;
    if (iter > 0 && std::abs(ll - previous) <= config.tolerance * std::abs(ll)) break;
    previous = ll;

    const Eigen::MatrixXd resp = (terms.colwise() - lse).array().exp().matrix();
    for (int l = 0; l < k; ++l) {
      const Eigen::VectorXd w = resp.col(l);
      const double nk = w.sum();
      if (!(nk > 1e-8)) return r;  // component collapsed to nothing
      m.weights[l] = nk / static_cast<double>(n);
      m.means[l] = (x.transpose() * w) / nk;
      m.covariances[l] = weighted_covariance<Dim>(x, m.means[l], w, nk);
      regularize<Dim>(m.covariances[l], floor);
    }
  }
  // Likelihood of the final parameters.
  if (!component_log_terms(m, x, terms)) return r;
  r.log_likelihood = row_log_sum_exp(terms).sum();
  r.ok = std::isfinite(r.log_likelihood);
  return r;
}

template <int Dim>
RunResult<Dim> best_of_restarts(const SampleMatrix<Dim>& x, int k, const Eigen::VectorXd& floor,
                                const EMConfig& config) {
  if (k == 1) return single_component<Dim>(x, floor);
  const double n = static_cast<double>(x.rows());
  const Vec<Dim> mean = x.colwise().mean().transpose();
  Mat<Dim> global = weighted_covariance<Dim>(x, mean, Eigen::VectorXd::Ones(x.rows()), n);
  regularize<Dim>(global, floor);

  RunResult<Dim> best;
  for (int restart = 0; restart < std::max(1, config.restarts); ++restart) {
    std::mt19937_64 rng(derive_seed(config.seed, static_cast<std::uint64_t>(k) * 1009 + restart));
    RunResult<Dim> r = run_em<Dim>(x, k, global, floor, config, rng);
    if (r.ok && (!best.ok || r.log_likelihood > best.log_likelihood)) best = std::move(r);
  }
  return best;
}

bool all_rows_identical(const Eigen::MatrixXd& x) {
  for (Eigen::Index t = 1; t < x.rows(); ++t)
    if (x.row(t) != x.row(0)) return false;
  return true;
}

}  // namespace

int mixture_parameter_count(int components, int dim) {
  return components * (dim + dim * (dim + 1) / 2) + components - 1;
}

template <int Dim>
Eigen::VectorXd mixture_log_density(const GaussianMixture<Dim>& mixture,
                                    const SampleMatrix<Dim>& x) {
  Eigen::MatrixXd terms;
  if (!component_log_terms(mixture, x, terms))
    throw NumericalError("mixture has a covariance that is not positive definite");
  return row_log_sum_exp(terms);
}

template <int Dim>
MixtureFit<Dim> fit_mixture_order(const SampleMatrix<Dim>& x, int components,
                                  const EMConfig& config) {
  if (x.rows() == 0) throw DomainError("cannot fit a mixture to zero rows");
  const Eigen::VectorXd floor = variance_floor(x, config.variance_floor);
  MixtureFit<Dim> fit;
  const double n = static_cast<double>(x.rows());
  const int d = static_cast<int>(x.cols());

  if (all_rows_identical(x)) {
    fit.degenerate = true;
    fit.mixture.weights = {1.0};
    fit.mixture.means = {x.row(0).transpose()};
    Mat<Dim> cov = Mat<Dim>::Zero(d, d);
    cov.diagonal() = floor;
    fit.mixture.covariances = {cov};
    fit.log_likelihood = mixture_log_density<Dim>(fit.mixture, x).sum();
    fit.bic = -2.0 * fit.log_likelihood + mixture_parameter_count(1, d) * std::log(n);
    fit.bic_by_order = {fit.bic};
    return fit;
  }

  RunResult<Dim> r = best_of_restarts<Dim>(x, components, floor, config);
  if (!r.ok)
    throw NumericalError("EM failed to produce a finite likelihood at order " +
                         std::to_string(components));
  fit.mixture = std::move(r.mixture);
  fit.log_likelihood = r.log_likelihood;
  fit.bic = -2.0 * fit.log_likelihood + mixture_parameter_count(components, d) * std::log(n);
  fit.bic_by_order.assign(components, std::numeric_limits<double>::quiet_NaN());
  fit.bic_by_order.back() = fit.bic;
  return fit;
}

template <int Dim>
MixtureFit<Dim> fit_mixture(const SampleMatrix<Dim>& x, const EMConfig& config) {
  if (x.rows() == 0) throw DomainError("cannot fit a mixture to zero rows");
  const Eigen::VectorXd floor = variance_floor(x, config.variance_floor);
  const double n = static_cast<double>(x.rows());
  const int d = static_cast<int>(x.cols());
  if (all_rows_identical(x)) return fit_mixture_order<Dim>(x, 1, config);

  const int max_order =
      std::max(1, std::min(config.max_components, static_cast<int>(x.rows() / 10)));
  MixtureFit<Dim> best;
  bool have_best = false;
  int misses = 0;
  for (int k = 1; k <= max_order; ++k) {
    RunResult<Dim> r = best_of_restarts<Dim>(x, k, floor, config);
    double bic = std::numeric_limits<double>::quiet_NaN();
    if (r.ok) bic = -2.0 * r.log_likelihood + mixture_parameter_count(k, d) * std::log(n);
    best.bic_by_order.push_back(bic);
    if (r.ok && (!have_best || bic < best.bic)) {
      best.mixture = std::move(r.mixture);
      best.log_likelihood = r.log_likelihood;
      best.bic = bic;
      have_best = true;
      misses = 0;
    } else if (++misses >= std::max(1, config.bic_patience)) {
      break;
    }
  }
  if (!have_best) throw NumericalError("EM failed to produce a finite likelihood at every order");
  return best;
}

template Eigen::VectorXd mixture_log_density<1>(const GaussianMixture<1>&, const SampleMatrix<1>&);
template Eigen::VectorXd mixture_log_density<2>(const GaussianMixture<2>&, const SampleMatrix<2>&);
template Eigen::VectorXd mixture_log_density<Eigen::Dynamic>(
    const GaussianMixture<Eigen::Dynamic>&, const SampleMatrix<Eigen::Dynamic>&);
template MixtureFit<1> fit_mixture<1>(const SampleMatrix<1>&, const EMConfig&);
template MixtureFit<2> fit_mixture<2>(const SampleMatrix<2>&, const EMConfig&);
template MixtureFit<Eigen::Dynamic> fit_mixture<Eigen::Dynamic>(
    const SampleMatrix<Eigen::Dynamic>&, const EMConfig&);
template MixtureFit<1> fit_mixture_order<1>(const SampleMatrix<1>&, int, const EMConfig&);
template MixtureFit<2> fit_mixture_order<2>(const SampleMatrix<2>&, int, const EMConfig&);
template MixtureFit<Eigen::Dynamic> fit_mixture_order<Eigen::Dynamic>(
    const SampleMatrix<Eigen::Dynamic>&, int, const EMConfig&);

}  // namespace gad
