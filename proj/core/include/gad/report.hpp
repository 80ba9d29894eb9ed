#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gad {

/// Best candidate found at one feature-subset order during an extraction.
struct OrderBest {
  std::size_t order = 0;
  std::vector<std::size_t> features;
  double log_score = 0.0;
};

/// A detected cluster: feature subset, its optimal sample subset (batch row
/// indices in ascending joint p-value order) and the log joint score.
struct ClusterCandidate {
  std::vector<std::size_t> features;
  std::vector<std::size_t> samples;
  std::vector<double> per_sample_log_p;
  double log_score = 0.0;
  std::vector<OrderBest> order_best;
};

/// Result of a detector run over a test batch: extracted clusters (possibly
/// none, for pure ranking baselines) and a total ranking of the batch rows.
struct DetectionReport {
  std::string method;
  std::vector<ClusterCandidate> clusters;
  std::vector<std::size_t> ranked_samples;
  /// Row identifiers, indexed by batch row.
  std::vector<std::string> sample_ids;

  /// Ranked identifiers (sample_ids[ranked_samples[i]]).
  std::vector<std::string> ranked_ids() const;

  nlohmann::json to_json() const;
  static DetectionReport from_json(const nlohmann::json& doc);
  void save(const std::filesystem::path& path) const;
  static DetectionReport load(const std::filesystem::path& path);
};

}  // namespace gad
