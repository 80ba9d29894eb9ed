#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <nlohmann/json.hpp>

#include "gad/data.hpp"

namespace gad {

/// Normal samples are N(0, I) in `dimension` features. Cluster c copies the
/// normal distribution except on feature informative[c], whose mean is shifted
/// by `shift` standard deviations.
struct SyntheticSpec {
  std::size_t dimension = 10;
  /// Size of the test batch (normals plus every cluster).
  std::size_t batch_size = 10'000;
  /// Size of each cluster as a fraction of the test batch.
  double cluster_fraction = 0.025;
  std::vector<std::size_t> informative{3, 7};
  double shift = 2.0;
  /// Fraction of all generated normal samples held out for training.
  double train_fraction = 0.2;
  std::uint64_t seed = 0;

  /// Throws DomainError on an invalid combination of fields.
  void validate() const;
  std::size_t cluster_size() const;
  std::size_t test_normals() const;
  std::size_t train_size() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static SyntheticSpec from_json(const nlohmann::json& doc);
  static SyntheticSpec load(const std::filesystem::path& path);
};

struct SyntheticData {
  DataBatch train;  // normals only, unlabeled
  DataBatch test;   // shuffled; labels "normal", "cluster_1", "cluster_2", ...
};

inline constexpr const char* kNormalLabel = "normal";

/// Deterministic given spec.seed. Test rows have ids s0, s1, ...; training
/// rows continue the numbering.
SyntheticData generate(const SyntheticSpec& spec);

/// Balanced error of thresholding each cluster's informative feature at half
/// the shift (the equal-prior Bayes rule), averaged over clusters, measured on
/// the labelled test batch.
double threshold_error(const SyntheticSpec& spec, const DataBatch& test);

}  // namespace gad
