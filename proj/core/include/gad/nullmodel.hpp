#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gad/data.hpp"
#include "gad/mixture.hpp"

namespace gad {

/// One-dimensional Gaussian mixture null for a single feature.
struct UnivariateGMM {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  bool degenerate = false;

  std::size_t components() const { return weights.size(); }
  double log_density(double x) const;
  /// Throws DomainError when weights/variances violate the type invariants.
  void validate() const;
};

/// Symmetric 2×2 covariance.
struct Covariance2 {
  double xx = 1.0;
  double xy = 0.0;
  double yy = 1.0;

  double determinant() const { return xx * yy - xy * xy; }
  double correlation() const;
};

/// Two-dimensional Gaussian mixture null for a feature pair. Slot 0 is the
/// lower feature index of the pair.
struct BivariateGMM {
  std::vector<double> weights;
  std::vector<std::array<double, 2>> means;
  std::vector<Covariance2> covariances;
  bool degenerate = false;

  std::size_t components() const { return weights.size(); }
  double log_density(double x0, double x1) const;
  void validate() const;
};

/// Training options for the full null model.
struct NullModelConfig {
  EMConfig univariate_em{};
  EMConfig bivariate_em{};
  std::size_t mi_samples = 1'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t min_training_rows = 20;
};

inline constexpr int kNullModelFormatVersion = 1;

/// All univariate and bivariate mixture nulls plus the pairwise mutual
/// information matrix. Immutable after construction.
class NullModel {
 public:
  NullModel() = default;
  NullModel(std::vector<std::string> feature_names, std::vector<UnivariateGMM> univariate,
            std::vector<BivariateGMM> bivariate, std::vector<double> mi, std::size_t training_rows,
            std::string config_hash);

  std::size_t dimension() const { return names_.size(); }
  std::size_t training_rows() const { return training_rows_; }
  const std::string& config_hash() const { return config_hash_; }
  const std::vector<std::string>& feature_names() const { return names_; }

  const UnivariateGMM& univariate(std::size_t j) const { return univariate_.at(j); }
  /// Pair model for j < k; slot 0 holds feature j.
  const BivariateGMM& bivariate(std::size_t j, std::size_t k) const;
  double mutual_information(std::size_t j, std::size_t k) const { return mi_[j * dimension() + k]; }

  /// Index of the unordered pair (j, k), j < k, in row-major upper-triangle order.
  static std::size_t pair_index(std::size_t j, std::size_t k, std::size_t dimension);
  std::size_t pair_count() const { return bivariate_.size(); }

  nlohmann::json to_json() const;
  static NullModel from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static NullModel load(const std::filesystem::path& path);

 private:
  std::vector<std::string> names_;
  std::vector<UnivariateGMM> univariate_;
  std::vector<BivariateGMM> bivariate_;
  std::vector<double> mi_;
  std::size_t training_rows_ = 0;
  std::string config_hash_;
};

UnivariateGMM fit_univariate(std::span<const double> column, const EMConfig& config);
BivariateGMM fit_bivariate(std::span<const double> first, std::span<const double> second,
                           const EMConfig& config);

/// Exact marginal of a pair model onto slot `keep` (0 or 1).
UnivariateGMM marginalize(const BivariateGMM& pair_model, int keep);

/// Posterior component probabilities at a point. If every component density
/// underflows, the nearest component by Mahalanobis distance gets probability 1.
std::vector<double> responsibilities(const UnivariateGMM& model, double x);
std::vector<double> responsibilities(const BivariateGMM& model, double x0, double x1);

/// Monte-Carlo mutual information of the pair model, clamped at zero.
double estimate_mi(const BivariateGMM& pair_model, std::size_t samples, std::uint64_t seed);

/// Draws from the mixtures (used by MI estimation and by oracle tests).
std::vector<double> sample(const UnivariateGMM& model, std::size_t n, std::uint64_t seed);
std::vector<std::array<double, 2>> sample(const BivariateGMM& model, std::size_t n,
                                          std::uint64_t seed);

/// Fits every univariate and bivariate null and the MI matrix. Labels in the
/// batch are ignored. Throws DataQualityError on non-finite cells or too few rows.
NullModel train_null(const DataBatch& batch, const NullModelConfig& config);

/// Stable FNV-1a digest of the training configuration.
std::string config_digest(const NullModelConfig& config);

}  // namespace gad
