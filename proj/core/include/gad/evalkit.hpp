#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "gad/baselines.hpp"
#include "gad/data.hpp"
#include "gad/mixture.hpp"
#include "gad/nullmodel.hpp"
#include "gad/report.hpp"
#include "gad/search.hpp"
#include "gad/synthgen.hpp"

namespace gad {

/// Area under the ROC curve swept down a total ranking. `positive[r]` marks
/// batch row r as anomalous; `ranked` must be a permutation of the rows.
/// Throws DomainError when only one class is present.
double roc_auc(std::span<const std::size_t> ranked, const std::vector<bool>& positive);

struct Precision {
  double value = 0.0;
  /// The ranking held fewer than k samples, so its full length was used.
  bool truncated = false;
};

/// Fraction of positives among the first k ranked samples.
Precision top_k_precision(std::span<const std::size_t> ranked, const std::vector<bool>& positive,
                          std::size_t k = 100);

/// Fraction of positives in the first extracted cluster; nullopt if none.
std::optional<double> first_cluster_purity(const DetectionReport& report,
                                           const std::vector<bool>& positive);

/// positive[r] = labels[r] != normal_label.
std::vector<bool> positives_from_labels(const std::vector<std::string>& labels,
                                        std::string_view normal_label = kNormalLabel);

enum class Method { proposed, independence, single_bn, gmm };

std::string_view to_string(Method method);
/// Throws DomainError on an unknown name.
Method parse_method(std::string_view name);

/// Runs one detector. `model` is unused by the gmm method; `train` is used only by it.
DetectionReport run_method(Method method, const NullModel& model, const DataBatch& train,
                           const DataBatch& test, const SearchConfig& search,
                           const EMConfig& gmm_em,
                           IndependenceMode independence = IndependenceMode::pairwise);

/// Labelled dataset to resplit per seed: train_fraction of the normal rows
/// train the null, the rest plus every anomalous row form the test batch.
struct LabelledDataset {
  DataBatch data;
  double train_fraction = 0.2;
  std::string normal_label = kNormalLabel;
};

SyntheticData resplit(const LabelledDataset& dataset, std::uint64_t seed);

struct SweepConfig {
  std::variant<SyntheticSpec, LabelledDataset> source = SyntheticSpec{};
  std::vector<Method> methods{Method::proposed, Method::independence, Method::single_bn,
                              Method::gmm};
  std::vector<std::size_t> k_max{1, 2, 3, 4, 5, 6};
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  NullModelConfig null{};
  SearchConfig search{};
  EMConfig gmm_em{};
  IndependenceMode independence = IndependenceMode::pairwise;
  std::size_t precision_k = 100;
};

struct SweepRecord {
  Method method = Method::proposed;
  std::size_t k_max = 0;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double precision = 0.0;
  bool precision_truncated = false;
  std::optional<double> first_purity;
  std::size_t clusters = 0;
  /// Non-empty when the run failed; the metrics are then meaningless.
  std::string error;
};

struct SweepAggregate {
  Method method = Method::proposed;
  std::size_t k_max = 0;
  std::size_t runs = 0;  // successful seeds
  std::size_t failures = 0;
  double auc_mean = 0.0;
  double auc_sd = 0.0;
  double precision_mean = 0.0;
  double precision_sd = 0.0;
  std::optional<double> purity_mean;
};

struct ExperimentResult {
  std::vector<SweepRecord> records;
  std::vector<SweepAggregate> aggregates;

  const SweepAggregate* find(Method method, std::size_t k_max) const;
  nlohmann::json to_json() const;
  /// Per-seed rows followed by one aggregate row (seed "mean") per cell.
  void write_csv(std::ostream& out) const;
  /// One `<method>.dat` file per method: k_max, AUC and precision mean/sd.
  void write_gnuplot(const std::filesystem::path& directory) const;
};

/// Sample mean and standard deviation (n - 1 denominator; 0 for n < 2).
std::pair<double, double> mean_sd(std::span<const double> values);

std::vector<SweepAggregate> aggregate(const std::vector<SweepRecord>& records);

using SweepProgress = std::function<void(const SweepRecord&)>;

/// For each seed: regenerate or resplit, retrain the null, run every method at
/// every k_max and score it. Failures are recorded per cell and the sweep
/// continues. The gmm method does not depend on k_max and is run once per seed.
ExperimentResult run_sweep(const SweepConfig& config, const SweepProgress& progress = {});

}  // namespace gad
