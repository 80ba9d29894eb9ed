#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gad/error.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kDataQuality = 3, kNumerical = 4 };

void add_em_options(CLI::App* cmd, gad::cli::EmOptions& em) {
  cmd->add_option("--max-components", em.max_components, "Largest mixture order tried")
      ->capture_default_str();
  cmd->add_option("--restarts", em.restarts, "EM restarts per order")->capture_default_str();
  cmd->add_option("--tolerance", em.tolerance, "Relative log-likelihood convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iterations", em.max_iterations, "EM iteration cap")->capture_default_str();
  cmd->add_option("--bic-patience", em.bic_patience,
                  "Stop after this many consecutive orders without a BIC improvement")
      ->capture_default_str();
  cmd->add_option("--variance-floor", em.variance_floor,
                  "Variance floor relative to each column's variance")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gad::cli;

  CLI::App app{"Group anomaly detection with mixture p-values and dependence trees"};
  app.set_version_flag("--version", std::string("gad ") + GAD_VERSION);
  app.set_config("--config", "", "Read options from a TOML file");
  app.require_subcommand(1);

  Common common;
  app.add_option("--seed", common.seed, "Global random seed")->capture_default_str();
  app.add_option("--threads", common.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_flag("--fast", common.fast, "Cap Monte-Carlo MI samples at 1e5");

  FeaturizeOptions featurize;
  auto* cmd_featurize = app.add_subcommand("featurize", "Convert JSONL flows to a feature CSV");
  cmd_featurize->add_option("-i,--input", featurize.input, "JSONL flow file")->required();
  cmd_featurize->add_option("-o,--output", featurize.output, "Output CSV")->required();
  cmd_featurize->add_option("-n,--packets", featurize.packets, "Packets per flow (N)")
      ->capture_default_str();
  cmd_featurize->add_option("--lead", featurize.lead, "Direction of the first slot")
      ->check(CLI::IsMember({"cs", "sc"}))
      ->capture_default_str();
  cmd_featurize->add_flag("--strict", featurize.strict, "Fail on the first malformed line");

  TrainOptions train;
  auto* cmd_train = app.add_subcommand("train", "Fit the null model on normal samples");
  cmd_train->add_option("-i,--input", train.input, "Training CSV")->required();
  cmd_train->add_option("-o,--output", train.output, "Model JSON")->required();
  cmd_train->add_option("--mi-samples", train.mi_samples, "Monte-Carlo samples per MI estimate")
      ->capture_default_str();
  cmd_train->add_option("--min-rows", train.min_rows, "Minimum training rows")
      ->capture_default_str();
  add_em_options(cmd_train, train.em);

  DetectOptions detect;
  auto* cmd_detect = app.add_subcommand("detect", "Detect anomalous groups in a test batch");
  cmd_detect->add_option("-m,--model", detect.model, "Model JSON (all methods but gmm)");
  cmd_detect->add_option("-i,--input", detect.input, "Test CSV")->required();
  cmd_detect->add_option("-o,--output", detect.output, "Report JSON")->required();
  cmd_detect->add_option("--method", detect.method, "Detector")
      ->check(CLI::IsMember({"proposed", "independence", "single_bn", "gmm"}))
      ->capture_default_str();
  cmd_detect->add_option("--train", detect.train, "Training CSV (gmm only)");
  cmd_detect->add_option("--k-max", detect.k_max, "Largest feature subset size")
      ->capture_default_str();
  cmd_detect->add_option("--beam-width", detect.beam_width, "Candidates kept per order")
      ->capture_default_str();
  cmd_detect->add_option("--max-clusters", detect.max_clusters, "Extraction cap (0 = none)")
      ->capture_default_str();
  cmd_detect->add_option("--min-cluster-size", detect.min_cluster_size, "Smallest cluster")
      ->capture_default_str();
  cmd_detect->add_option("--subset-rule", detect.subset_rule, "Sample subset rule")
      ->check(CLI::IsMember({"global_prefix", "first_increase"}))
      ->capture_default_str();
  cmd_detect->add_option("--independence-mode", detect.independence_mode,
                         "P-values multiplied by the independence baseline")
      ->check(CLI::IsMember({"pairwise", "singleton"}))
      ->capture_default_str();
  add_em_options(cmd_detect, detect.em);

  SynthOptions synth;
  auto* cmd_synth = app.add_subcommand("synth", "Generate the synthetic two-cluster benchmark");
  cmd_synth->add_option("-s,--spec", synth.spec, "Synthetic spec JSON (defaults if omitted)");
  cmd_synth->add_option("-o,--output-dir", synth.output_dir, "Output directory")->required();
  cmd_synth->add_option("--batch-size", synth.batch_size, "Override the test batch size");

  EvalOptions eval;
  auto* cmd_eval = app.add_subcommand("eval", "Score detection reports against labels");
  cmd_eval->add_option("-l,--labels", eval.labels, "Labelled test CSV")->required();
  cmd_eval->add_option("-r,--report", eval.reports, "Report JSON (repeatable)")->required();
  cmd_eval->add_option("-o,--output", eval.output, "Metric table CSV (stdout if omitted)");
  cmd_eval->add_option("-k", eval.k, "Cut-off for top-k precision")->capture_default_str();

  SweepOptions sweep;
  auto* cmd_sweep = app.add_subcommand("sweep", "Multi-seed, multi-K_max experiment");
  cmd_sweep->add_option("-s,--spec", sweep.spec, "Synthetic spec JSON");
  cmd_sweep->add_option("-d,--data", sweep.data, "Labelled CSV to resplit per seed");
  cmd_sweep->add_option("-o,--output-dir", sweep.output_dir, "Output directory")->required();
  cmd_sweep->add_option("--methods", sweep.methods, "Detectors")
      ->check(CLI::IsMember({"proposed", "independence", "single_bn", "gmm"}))
      ->capture_default_str();
  cmd_sweep->add_option("--k-max", sweep.k_max, "K_max values")->capture_default_str();
  cmd_sweep->add_option("--seeds", sweep.seeds, "Number of seeds, starting at --seed")
      ->capture_default_str();
  cmd_sweep->add_option("--batch-size", sweep.batch_size, "Override the synthetic batch size");
  cmd_sweep->add_option("--beam-width", sweep.beam_width, "Candidates kept per order")
      ->capture_default_str();
  cmd_sweep->add_option("--min-cluster-size", sweep.min_cluster_size, "Smallest cluster")
      ->capture_default_str();
  cmd_sweep->add_option("--max-clusters", sweep.max_clusters, "Extraction cap (0 = none)")
      ->capture_default_str();
  cmd_sweep->add_option("--subset-rule", sweep.subset_rule, "Sample subset rule")
      ->check(CLI::IsMember({"global_prefix", "first_increase"}))
      ->capture_default_str();
  cmd_sweep->add_option("--independence-mode", sweep.independence_mode,
                        "P-values multiplied by the independence baseline")
      ->check(CLI::IsMember({"pairwise", "singleton"}))
      ->capture_default_str();
  cmd_sweep->add_option("--mi-samples", sweep.mi_samples, "Monte-Carlo samples per MI estimate")
      ->capture_default_str();
  add_em_options(cmd_sweep, sweep.em);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  common.config_text = app.config_to_str(true, false);
  for (int i = 0; i < argc; ++i) common.command_line += (i ? " " : "") + std::string(argv[i]);

  try {
    if (*cmd_featurize) return run_featurize(featurize, common);
    if (*cmd_train) return run_train(train, common);
    if (*cmd_detect) return run_detect(detect, common);
    if (*cmd_synth) return run_synth(synth, common);
    if (*cmd_eval) return run_eval(eval, common);
    if (*cmd_sweep) return run_sweep(sweep, common);
  } catch (const gad::DataQualityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataQuality;
  } catch (const gad::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const gad::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
