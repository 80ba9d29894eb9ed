#include "gad/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <tuple>

#include "gad/error.hpp"
#include "gad/random.hpp"

namespace gad {

namespace {

void require_permutation(std::span<const std::size_t> ranked, std::size_t rows) {
  if (ranked.size() != rows)
    throw DomainError("ranking covers " + std::to_string(ranked.size()) + " of " +
                      std::to_string(rows) + " samples");
  std::vector<char> seen(rows, 0);
  for (std::size_t r : ranked) {
    if (r >= rows || seen[r]) throw DomainError("ranking is not a permutation of the samples");
    seen[r] = 1;
  }
}

}  // namespace

double roc_auc(std::span<const std::size_t> ranked, const std::vector<bool>& positive) {
  require_permutation(ranked, positive.size());
  const auto pos = static_cast<std::size_t>(std::count(positive.begin(), positive.end(), true));
  const std::size_t neg = positive.size() - pos;
  if (pos == 0 || neg == 0) throw DomainError("ROC AUC needs both positive and negative samples");

  // Trapezoids between consecutive ROC points; each step moves along one axis,
  // so the area is the count of (positive ranked above negative) pairs.
  double area = 0.0;
  std::size_t tp = 0;
  for (std::size_t r : ranked) {
    if (positive[r])
      ++tp;
    else
      area += static_cast<double>(tp);
  }
  return area / (static_cast<double>(pos) * static_cast<double>(neg));
}

Precision top_k_precision(std::span<const std::size_t> ranked, const std::vector<bool>& positive,
                          std::size_t k) {
  if (k == 0) throw DomainError("top-k precision needs k >= 1");
  Precision out;
  std::size_t used = k;
  if (ranked.size() < k) {
    used = ranked.size();
    out.truncated = true;
  }
  if (used == 0) return out;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < used; ++i) hits += positive.at(ranked[i]) ? 1 : 0;
  out.value = static_cast<double>(hits) / static_cast<double>(used);
  return out;
}

std::optional<double> first_cluster_purity(const DetectionReport& report,
                                           const std::vector<bool>& positive) {
  if (report.clusters.empty() || report.clusters.front().samples.empty()) return std::nullopt;
  const auto& samples = report.clusters.front().samples;
  std::size_t hits = 0;
  for (std::size_t r : samples) hits += positive.at(r) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

std::vector<bool> positives_from_labels(const std::vector<std::string>& labels,
                                        std::string_view normal_label) {
  std::vector<bool> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = labels[i] != normal_label;
  return out;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::proposed: return "proposed";
    case Method::independence: return "independence";
    case Method::single_bn: return "single_bn";
    case Method::gmm: return "gmm";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::proposed, Method::independence, Method::single_bn, Method::gmm})
    if (to_string(m) == name) return m;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

DetectionReport run_method(Method method, const NullModel& model, const DataBatch& train,
                           const DataBatch& test, const SearchConfig& search,
                           const EMConfig& gmm_em, IndependenceMode independence) {
  switch (method) {
    case Method::proposed: return detect_all(model, test, search);
    case Method::independence: return detect_independence(model, test, search, independence);
    case Method::single_bn: return detect_single_bn(model, test, search);
    case Method::gmm: return detect_gmm(train, test, gmm_em);
  }
  throw DomainError("unknown method");
}

SyntheticData resplit(const LabelledDataset& dataset, std::uint64_t seed) {
  const DataBatch& data = dataset.data;
  if (!data.has_labels()) throw DataQualityError("dataset needs a label column to be resplit");
  if (!(dataset.train_fraction > 0.0 && dataset.train_fraction < 1.0))
    throw DomainError("train_fraction must lie in (0, 1)");
  std::vector<std::size_t> normals;
  std::vector<std::size_t> test_rows;
  for (std::size_t r = 0; r < data.rows(); ++r)
    (data.labels()[r] == dataset.normal_label ? normals : test_rows).push_back(r);

  std::mt19937_64 rng(derive_seed(seed, 0));
  std::shuffle(normals.begin(), normals.end(), rng);
  const auto n_train = static_cast<std::size_t>(
      std::llround(dataset.train_fraction * static_cast<double>(normals.size())));
  std::vector<std::size_t> train_rows(normals.begin(), normals.begin() + n_train);
  test_rows.insert(test_rows.end(), normals.begin() + n_train, normals.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  return {data.select_rows(train_rows), data.select_rows(test_rows)};
}

const SweepAggregate* ExperimentResult::find(Method method, std::size_t k_max) const {
  for (const auto& a : aggregates)
    if (a.method == method && a.k_max == k_max) return &a;
  return nullptr;
}

std::pair<double, double> mean_sd(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<SweepAggregate> aggregate(const std::vector<SweepRecord>& records) {
  std::map<std::tuple<int, std::size_t>, std::vector<const SweepRecord*>> cells;
  for (const auto& r : records) cells[{static_cast<int>(r.method), r.k_max}].push_back(&r);
  std::vector<SweepAggregate> out;
  for (const auto& [key, rs] : cells) {
    SweepAggregate a;
    a.method = static_cast<Method>(std::get<0>(key));
    a.k_max = std::get<1>(key);
    std::vector<double> aucs, precisions, purities;
    for (const SweepRecord* r : rs) {
      if (!r->error.empty()) {
        ++a.failures;
        continue;
      }
      aucs.push_back(r->auc);
      precisions.push_back(r->precision);
      if (r->first_purity) purities.push_back(*r->first_purity);
    }
    a.runs = aucs.size();
    std::tie(a.auc_mean, a.auc_sd) = mean_sd(aucs);
    std::tie(a.precision_mean, a.precision_sd) = mean_sd(precisions);
    if (!purities.empty()) a.purity_mean = mean_sd(purities).first;
    out.push_back(a);
  }
  return out;
}

nlohmann::json ExperimentResult::to_json() const {
  using nlohmann::json;
  json recs = json::array();
  for (const auto& r : records) {
    json j{{"method", to_string(r.method)}, {"k_max", r.k_max},   {"seed", r.seed},
           {"auc", r.auc},                  {"precision", r.precision},
           {"precision_truncated", r.precision_truncated},       {"clusters", r.clusters}};
    j["first_purity"] = r.first_purity ? json(*r.first_purity) : json(nullptr);
    if (!r.error.empty()) j["error"] = r.error;
    recs.push_back(std::move(j));
  }
  json aggs = json::array();
  for (const auto& a : aggregates) {
    json j{{"method", to_string(a.method)}, {"k_max", a.k_max},
           {"runs", a.runs},                {"failures", a.failures},
           {"auc_mean", a.auc_mean},        {"auc_sd", a.auc_sd},
           {"precision_mean", a.precision_mean}, {"precision_sd", a.precision_sd}};
    j["purity_mean"] = a.purity_mean ? json(*a.purity_mean) : json(nullptr);
    aggs.push_back(std::move(j));
  }
  return {{"records", std::move(recs)}, {"aggregates", std::move(aggs)}};
}

void ExperimentResult::write_csv(std::ostream& out) const {
  auto purity = [](const std::optional<double>& p) { return p ? std::to_string(*p) : std::string{}; };
  out << "method,k_max,seed,auc,auc_sd,precision,precision_sd,first_purity,clusters,error\n";
  for (const auto& a : aggregates) {
    for (const auto& r : records) {
      if (r.method != a.method || r.k_max != a.k_max) continue;
      out << to_string(r.method) << ',' << r.k_max << ',' << r.seed << ',' << r.auc << ",,"
          << r.precision << ",," << purity(r.first_purity) << ',' << r.clusters << ',';
      if (!r.error.empty()) {
        std::string e = r.error;
        std::replace(e.begin(), e.end(), '"', '\'');
        out << '"' << e << '"';
      }
      out << '\n';
    }
    out << to_string(a.method) << ',' << a.k_max << ",mean," << a.auc_mean << ',' << a.auc_sd
        << ',' << a.precision_mean << ',' << a.precision_sd << ',' << purity(a.purity_mean)
        << ",," << (a.failures ? std::to_string(a.failures) + " failed" : std::string{}) << '\n';
  }
}

void ExperimentResult::write_gnuplot(const std::filesystem::path& directory) const {
  std::filesystem::create_directories(directory);
  std::map<int, std::vector<const SweepAggregate*>> by_method;
  for (const auto& a : aggregates) by_method[static_cast<int>(a.method)].push_back(&a);
  for (const auto& [m, rows] : by_method) {
    const auto path = directory / (std::string(to_string(static_cast<Method>(m))) + ".dat");
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "# k_max auc_mean auc_sd precision_mean precision_sd\n";
    for (const SweepAggregate* a : rows)
      out << a->k_max << ' ' << a->auc_mean << ' ' << a->auc_sd << ' ' << a->precision_mean << ' '
          << a->precision_sd << '\n';
  }
}

ExperimentResult run_sweep(const SweepConfig& config, const SweepProgress& progress) {
  if (config.methods.empty() || config.k_max.empty() || config.seeds.empty())
    throw DomainError("sweep needs at least one method, k_max and seed");
  ExperimentResult result;
  auto emit = [&](SweepRecord r) {
    if (progress) progress(r);
    result.records.push_back(std::move(r));
  };

  for (std::uint64_t seed : config.seeds) {
    SyntheticData data;
    std::optional<NullModel> model;
    std::string setup_error;
    try {
      if (const auto* spec = std::get_if<SyntheticSpec>(&config.source)) {
        SyntheticSpec s = *spec;
        s.seed = seed;
        data = generate(s);
      } else {
        data = resplit(std::get<LabelledDataset>(config.source), seed);
      }
      const bool needs_null = std::any_of(config.methods.begin(), config.methods.end(),
                                          [](Method m) { return m != Method::gmm; });
      if (needs_null) {
        NullModelConfig null = config.null;
        null.seed = seed;
        model = train_null(data.train, null);
      }
    } catch (const std::exception& e) {
      setup_error = e.what();
    }
    const std::vector<bool> positive =
        setup_error.empty() ? positives_from_labels(data.test.labels()) : std::vector<bool>{};

    for (Method method : config.methods) {
      std::optional<SweepRecord> gmm_once;
      for (std::size_t k : config.k_max) {
        SweepRecord rec;
        rec.method = method;
        rec.k_max = k;
        rec.seed = seed;
        if (!setup_error.empty()) {
          rec.error = setup_error;
          emit(std::move(rec));
          continue;
        }
        if (gmm_once) {
          rec = *gmm_once;
          rec.k_max = k;
          emit(std::move(rec));
          continue;
        }
        try {
          SearchConfig search = config.search;
          search.k_max = k;
          EMConfig em = config.gmm_em;
          em.seed = seed;
          const NullModel empty;
          const DetectionReport report = run_method(method, model ? *model : empty, data.train,
                                                    data.test, search, em, config.independence);
          rec.auc = roc_auc(report.ranked_samples, positive);
          const Precision p = top_k_precision(report.ranked_samples, positive, config.precision_k);
          rec.precision = p.value;
          rec.precision_truncated = p.truncated;
          rec.first_purity = first_cluster_purity(report, positive);
          rec.clusters = report.clusters.size();
        } catch (const std::exception& e) {
          rec.error = e.what();
        }
        if (method == Method::gmm) gmm_once = rec;
        emit(std::move(rec));
      }
    }
  }
  result.aggregates = aggregate(result.records);
  return result;
}

}  // namespace gad
