#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace gad::cli {

struct Common {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool fast = false;
  /// CLI11 TOML rendering of every option, stored in run manifests.
  std::string config_text;
  std::string command_line;
};

struct FeaturizeOptions {
  std::string input;
  std::string output;
  std::size_t packets = 10;
  std::string lead = "cs";
  bool strict = false;
};

struct EmOptions {
  int max_components = 10;
  int restarts = 5;
  double tolerance = 1e-7;
  int max_iterations = 500;
  int bic_patience = 2;
  double variance_floor = 1e-6;
};

struct TrainOptions {
  std::string input;
  std::string output;
  EmOptions em;
  std::size_t mi_samples = 1'000'000;
  std::size_t min_rows = 20;
};

struct DetectOptions {
  std::string model;
  std::string input;
  std::string output;
  std::string method = "proposed";
  std::string train;  // gmm only
  std::size_t k_max = 6;
  std::size_t beam_width = 500;
  std::size_t max_clusters = 0;
  std::size_t min_cluster_size = 2;
  std::string subset_rule = "global_prefix";
  std::string independence_mode = "pairwise";
  EmOptions em;
};

struct SynthOptions {
  std::string spec;
  std::string output_dir;
  std::size_t batch_size = 0;  // 0 = keep the spec's value
};

struct EvalOptions {
  std::string labels;
  std::vector<std::string> reports;
  std::string output;
  std::size_t k = 100;
};

struct SweepOptions {
  std::string spec;
  std::string data;  // labelled CSV instead of a synthetic spec
  std::string output_dir;
  std::vector<std::string> methods{"proposed", "independence", "single_bn", "gmm"};
  std::vector<std::size_t> k_max{1, 2, 3, 4, 5, 6};
  std::size_t seeds = 10;
  std::size_t batch_size = 0;
  std::size_t beam_width = 500;
  std::size_t min_cluster_size = 2;
  std::size_t max_clusters = 0;
  std::string subset_rule = "global_prefix";
  std::string independence_mode = "pairwise";
  std::size_t mi_samples = 1'000'000;
  EmOptions em;
};

int run_featurize(const FeaturizeOptions& o, const Common& c);
int run_train(const TrainOptions& o, const Common& c);
int run_detect(const DetectOptions& o, const Common& c);
int run_synth(const SynthOptions& o, const Common& c);
int run_eval(const EvalOptions& o, const Common& c);
int run_sweep(const SweepOptions& o, const Common& c);

}  // namespace gad::cli
