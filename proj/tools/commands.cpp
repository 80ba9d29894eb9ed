#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "gad/baselines.hpp"
#include "gad/csv.hpp"
#include "gad/error.hpp"
#include "gad/evalkit.hpp"
#include "gad/flowfeat.hpp"
#include "gad/nullmodel.hpp"
#include "gad/search.hpp"
#include "gad/synthgen.hpp"
#include "manifest.hpp"

namespace gad::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::size_t kFastMiSamples = 100'000;

fs::path manifest_for(const fs::path& output) {
  return fs::path(output.string() + ".manifest.json");
}

EMConfig to_em(const EmOptions& o, std::uint64_t seed) {
  EMConfig em;
  em.max_components = o.max_components;
  em.restarts = o.restarts;
  em.tolerance = o.tolerance;
  em.max_iterations = o.max_iterations;
  em.bic_patience = o.bic_patience;
  em.variance_floor = o.variance_floor;
  em.seed = seed;
  if (em.max_components < 1 || em.restarts < 1 || em.max_iterations < 1 || em.bic_patience < 1 ||
      !(em.tolerance > 0.0) || !(em.variance_floor > 0.0))
    throw DomainError("EM settings must be positive");
  return em;
}

SubsetRule parse_rule(const std::string& name) {
  if (name == "global_prefix") return SubsetRule::global_prefix;
  if (name == "first_increase") return SubsetRule::first_increase;
  throw DomainError("unknown subset rule '" + name + "'");
}

IndependenceMode parse_mode(const std::string& name) {
  if (name == "pairwise") return IndependenceMode::pairwise;
  if (name == "singleton") return IndependenceMode::singleton;
  throw DomainError("unknown independence mode '" + name + "'");
}

DataBatch read_checked(const std::string& path) {
  DataBatch batch = read_csv(fs::path(path));
  batch.require_finite();
  return batch;
}

void ensure_parent(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

}  // namespace

int run_featurize(const FeaturizeOptions& o, const Common& c) {
  if (o.packets == 0) throw DomainError("--packets must be at least 1");
  Direction lead;
  if (o.lead == "cs")
    lead = Direction::cs;
  else if (o.lead == "sc")
    lead = Direction::sc;
  else
    throw DomainError("--lead must be cs or sc");

  const IngestResult in = ingest_flows(fs::path(o.input), o.strict);
  for (const auto& e : in.errors)
    std::cerr << o.input << ":" << e.line << ": skipped: " << e.message << '\n';

  std::vector<FlowFeatureVector> vectors;
  vectors.reserve(in.flows.size());
  std::size_t empty = 0;
  for (const auto& flow : in.flows) {
    vectors.push_back(featurize(flow, o.packets, lead));
    empty += vectors.back().empty ? 1 : 0;
  }
  const fs::path out(o.output);
  ensure_parent(out);
  write_csv(out, to_batch(vectors, o.packets), true);
  std::cerr << "featurized " << vectors.size() << " flows (" << in.errors.size()
            << " malformed lines skipped, " << empty << " without packets)\n";
  write_manifest(manifest_for(out), "featurize", c.command_line, c.config_text,
                 {{"flows", vectors.size()}, {"skipped", in.errors.size()}});
  return 0;
}

int run_train(const TrainOptions& o, const Common& c) {
  const DataBatch batch = read_checked(o.input);
  NullModelConfig config;
  config.univariate_em = to_em(o.em, c.seed);
  config.bivariate_em = to_em(o.em, c.seed);
  config.mi_samples = c.fast ? std::min(o.mi_samples, kFastMiSamples) : o.mi_samples;
  config.seed = c.seed;
  config.threads = c.threads;
  config.min_training_rows = o.min_rows;
  if (config.mi_samples == 0) throw DomainError("--mi-samples must be positive");

  const NullModel model = train_null(batch, config);
  const fs::path out(o.output);
  ensure_parent(out);
  model.save(out);

  const std::size_t d = model.dimension();
  std::cout << "trained on " << model.training_rows() << " rows, " << d << " features\n";
  for (std::size_t j = 0; j < d; ++j)
    std::cout << "  " << model.feature_names()[j] << ": " << model.univariate(j).components()
              << " component(s)" << (model.univariate(j).degenerate ? " [constant]" : "") << '\n';
  if (d >= 2) {
    double total = 0.0, best = -1.0;
    std::size_t bj = 0, bk = 1;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t k = j + 1; k < d; ++k) {
        const double mi = model.mutual_information(j, k);
        total += mi;
        if (mi > best) std::tie(best, bj, bk) = std::tuple{mi, j, k};
      }
    std::cout << "  mutual information: mean " << total / static_cast<double>(model.pair_count())
              << ", max " << best << " (" << model.feature_names()[bj] << ", "
              << model.feature_names()[bk] << ")\n";
  }
  write_manifest(manifest_for(out), "train", c.command_line, c.config_text,
                 {{"seed", c.seed},
                  {"config_hash", model.config_hash()},
                  {"model_hash", file_digest(out)},
                  {"input_hash", file_digest(o.input)}});
  return 0;
}

int run_detect(const DetectOptions& o, const Common& c) {
  const Method method = parse_method(o.method);
  const DataBatch test = read_checked(o.input);

  SearchConfig search;
  search.k_max = o.k_max;
  search.beam_width = o.beam_width;
  search.max_clusters = o.max_clusters;
  search.min_cluster_size = o.min_cluster_size;
  search.subset_rule = parse_rule(o.subset_rule);
  search.threads = c.threads;
  if (search.k_max == 0 || search.beam_width == 0 || search.min_cluster_size == 0)
    throw DomainError("--k-max, --beam-width and --min-cluster-size must be positive");

  NullModel model;
  DataBatch train;
  nlohmann::json extra{{"seed", c.seed}, {"method", o.method}, {"input_hash", file_digest(o.input)}};
  if (method == Method::gmm) {
    if (o.train.empty()) throw DomainError("--method gmm requires --train");
    train = read_checked(o.train);
    extra["train_hash"] = file_digest(o.train);
  } else {
    if (o.model.empty()) throw DomainError("--model is required for method " + o.method);
    model = NullModel::load(o.model);
    if (model.dimension() != test.cols())
      throw DataQualityError("model has " + std::to_string(model.dimension()) +
                             " features but the batch has " + std::to_string(test.cols()));
    if (search.k_max > model.dimension()) search.k_max = model.dimension();
    extra["model_hash"] = file_digest(o.model);
  }

  const DetectionReport report = run_method(method, model, train, test, search,
                                            to_em(o.em, c.seed), parse_mode(o.independence_mode));
  const fs::path out(o.output);
  ensure_parent(out);
  report.save(out);
  std::cout << o.method << ": " << report.clusters.size() << " cluster(s), "
            << report.ranked_samples.size() << " ranked samples\n";
  for (std::size_t i = 0; i < std::min<std::size_t>(report.clusters.size(), 5); ++i) {
    const auto& cl = report.clusters[i];
    std::cout << "  #" << i + 1 << ": " << cl.samples.size() << " samples, features {";
    for (std::size_t f = 0; f < cl.features.size(); ++f)
      std::cout << (f ? "," : "") << test.feature_names()[cl.features[f]];
    std::cout << "}, log score " << cl.log_score << '\n';
  }
  write_manifest(manifest_for(out), "detect", c.command_line, c.config_text, extra);
  return 0;
}

int run_synth(const SynthOptions& o, const Common& c) {
  SyntheticSpec spec = o.spec.empty() ? SyntheticSpec{} : SyntheticSpec::load(o.spec);
  spec.seed = c.seed;
  if (o.batch_size != 0) spec.batch_size = o.batch_size;
  const SyntheticData data = generate(spec);
  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  write_csv(dir / "train.csv", data.train);
  write_csv(dir / "test.csv", data.test);
  {
    std::ofstream out(dir / "spec.json");
    if (!out) throw IoError("cannot write spec.json");
    out << spec.to_json().dump(1) << '\n';
  }
  std::cout << "train " << data.train.rows() << " rows, test " << data.test.rows() << " rows ("
            << spec.cluster_size() * spec.informative.size() << " anomalous)\n";
  write_manifest(dir / "manifest.json", "synth", c.command_line, c.config_text,
                 {{"seed", c.seed}, {"spec", spec.to_json()}});
  return 0;
}

int run_eval(const EvalOptions& o, const Common& c) {
  if (o.k == 0) throw DomainError("--k must be positive");
  const DataBatch labelled = read_csv(fs::path(o.labels));
  if (!labelled.has_labels()) throw DataQualityError("'" + o.labels + "' has no label column");
  std::map<std::string, bool> truth;
  for (std::size_t r = 0; r < labelled.rows(); ++r)
    truth[labelled.id(r)] = labelled.labels()[r] != kNormalLabel;
  if (truth.size() != labelled.rows()) throw DataQualityError("duplicate ids in '" + o.labels + "'");

  std::ostringstream table;
  table << "report,method,auc,precision_at_" << o.k << ",precision_truncated,first_purity,clusters\n";
  for (const auto& path : o.reports) {
    const DetectionReport report = DetectionReport::load(path);
    const std::size_t n = report.ranked_samples.size();
    if (report.sample_ids.size() != truth.size() || n != truth.size())
      throw DataQualityError("'" + path + "' covers " + std::to_string(n) + " samples but '" +
                             o.labels + "' has " + std::to_string(truth.size()));
    std::vector<bool> positive(report.sample_ids.size());
    for (std::size_t r = 0; r < report.sample_ids.size(); ++r) {
      const auto it = truth.find(report.sample_ids[r]);
      if (it == truth.end())
        throw DataQualityError("id '" + report.sample_ids[r] + "' in '" + path +
                               "' is missing from '" + o.labels + "'");
      positive[r] = it->second;
    }
    const double auc = roc_auc(report.ranked_samples, positive);
    const Precision p = top_k_precision(report.ranked_samples, positive, o.k);
    const auto purity = first_cluster_purity(report, positive);
    table << path << ',' << report.method << ',' << auc << ',' << p.value << ','
          << (p.truncated ? "true" : "false") << ',' << (purity ? std::to_string(*purity) : "")
          << ',' << report.clusters.size() << '\n';
  }
  if (o.output.empty()) {
    std::cout << table.str();
  } else {
    const fs::path out(o.output);
    ensure_parent(out);
    std::ofstream f(out);
    if (!f) throw IoError("cannot open '" + o.output + "' for writing");
    f << table.str();
    write_manifest(manifest_for(out), "eval", c.command_line, c.config_text,
                   {{"labels_hash", file_digest(o.labels)}});
  }
  return 0;
}

int run_sweep(const SweepOptions& o, const Common& c) {
  if (!o.spec.empty() && !o.data.empty()) throw DomainError("use either --spec or --data");
  if (o.seeds == 0) throw DomainError("--seeds must be positive");
  SweepConfig config;
  if (!o.data.empty()) {
    LabelledDataset dataset;
    dataset.data = read_checked(o.data);
    config.source = std::move(dataset);
  } else {
    SyntheticSpec spec = o.spec.empty() ? SyntheticSpec{} : SyntheticSpec::load(o.spec);
    if (o.batch_size != 0) spec.batch_size = o.batch_size;
    spec.validate();
    config.source = spec;
  }
  config.methods.clear();
  for (const auto& m : o.methods) config.methods.push_back(parse_method(m));
  config.k_max = o.k_max;
  if (std::find(config.k_max.begin(), config.k_max.end(), 0) != config.k_max.end())
    throw DomainError("--k-max values must be positive");
  config.seeds.resize(o.seeds);
  std::iota(config.seeds.begin(), config.seeds.end(), c.seed);
  config.null.univariate_em = to_em(o.em, c.seed);
  config.null.bivariate_em = to_em(o.em, c.seed);
  config.null.mi_samples = c.fast ? std::min(o.mi_samples, kFastMiSamples) : o.mi_samples;
  config.null.threads = c.threads;
  config.search.beam_width = o.beam_width;
  config.search.min_cluster_size = o.min_cluster_size;
  config.search.max_clusters = o.max_clusters;
  config.search.subset_rule = parse_rule(o.subset_rule);
  config.search.threads = c.threads;
  config.gmm_em = to_em(o.em, c.seed);
  config.independence = parse_mode(o.independence_mode);

  const ExperimentResult result = gad::run_sweep(config, [](const SweepRecord& r) {
    std::cerr << to_string(r.method) << " k_max=" << r.k_max << " seed=" << r.seed;
    if (r.error.empty())
      std::cerr << " auc=" << r.auc << " p@k=" << r.precision << '\n';
    else
      std::cerr << " FAILED: " << r.error << '\n';
  });

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "sweep.csv");
    result.write_csv(csv);
    std::ofstream json(dir / "sweep.json");
    json << result.to_json().dump(1) << '\n';
    if (!csv || !json) throw IoError("cannot write sweep results to '" + dir.string() + "'");
  }
  result.write_gnuplot(dir / "gnuplot");
  write_manifest(dir / "manifest.json", "sweep", c.command_line, c.config_text,
                 {{"seed", c.seed}, {"seeds", config.seeds}});

  for (const auto& a : result.aggregates)
    std::cout << to_string(a.method) << " k_max=" << a.k_max << " auc=" << a.auc_mean << "±"
              << a.auc_sd << " p@k=" << a.precision_mean << " (" << a.runs << " runs"
              << (a.failures ? ", " + std::to_string(a.failures) + " failed" : std::string{})
              << ")\n";
  bool any_failure = std::any_of(result.aggregates.begin(), result.aggregates.end(),
                                 [](const SweepAggregate& a) { return a.failures > 0; });
  return any_failure ? 4 : 0;
}

}  // namespace gad::cli
