#include "gad/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <string>

#include "gad/error.hpp"
#include "gad/random.hpp"

namespace gad {

void SyntheticSpec::validate() const {
  if (dimension == 0) throw DomainError("synthetic dimension must be positive");
  if (batch_size == 0) throw DomainError("synthetic batch_size must be positive");
  if (!(cluster_fraction > 0.0) || !std::isfinite(cluster_fraction))
    throw DomainError("cluster_fraction must be positive");
  if (cluster_fraction * static_cast<double>(informative.size()) >= 1.0)
    throw DomainError("cluster fractions must sum to less than 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw DomainError("train_fraction must lie in (0, 1)");
  if (!std::isfinite(shift)) throw DomainError("shift must be finite");
  std::vector<std::size_t> sorted = informative;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw DomainError("informative feature indices must be distinct");
  if (!sorted.empty() && sorted.back() >= dimension)
    throw DomainError("informative feature index out of range");
  if (cluster_size() == 0 && !informative.empty())
    throw DomainError("cluster_fraction rounds to an empty cluster");
}

std::size_t SyntheticSpec::cluster_size() const {
  return static_cast<std::size_t>(std::llround(cluster_fraction * static_cast<double>(batch_size)));
}

std::size_t SyntheticSpec::test_normals() const {
  return batch_size - cluster_size() * informative.size();
}

std::size_t SyntheticSpec::train_size() const {
  return static_cast<std::size_t>(std::llround(static_cast<double>(test_normals()) *
                                               train_fraction / (1.0 - train_fraction)));
}

nlohmann::json SyntheticSpec::to_json() const {
  return {{"dimension", dimension},         {"batch_size", batch_size},
          {"cluster_fraction", cluster_fraction}, {"informative", informative},
          {"shift", shift},                 {"train_fraction", train_fraction},
          {"seed", seed}};
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DataQualityError("synthetic spec must be a JSON object");
  SyntheticSpec spec;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "dimension") spec.dimension = value.get<std::size_t>();
      else if (key == "batch_size") spec.batch_size = value.get<std::size_t>();
      else if (key == "cluster_fraction") spec.cluster_fraction = value.get<double>();
      else if (key == "informative") spec.informative = value.get<std::vector<std::size_t>>();
      else if (key == "shift") spec.shift = value.get<double>();
      else if (key == "train_fraction") spec.train_fraction = value.get<double>();
      else if (key == "seed") spec.seed = value.get<std::uint64_t>();
      else throw DataQualityError("unknown synthetic spec key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataQualityError(std::string("malformed synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

SyntheticSpec SyntheticSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataQualityError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(doc);
}

SyntheticData generate(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t d = spec.dimension;
  std::vector<std::string> names;
  for (std::size_t j = 1; j <= d; ++j) names.push_back("x" + std::to_string(j));

  std::mt19937_64 rng(derive_seed(spec.seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);

  struct Row {
    std::vector<double> values;
    std::string label;
  };
  auto draw = [&](std::string label, std::optional<std::size_t> shifted) {
    Row row{std::vector<double>(d), std::move(label)};
    for (double& v : row.values) v = gauss(rng);
    if (shifted) row.values[*shifted] += spec.shift;
    return row;
  };

  std::vector<Row> test;
  test.reserve(spec.batch_size);
  for (std::size_t i = 0; i < spec.test_normals(); ++i) test.push_back(draw(kNormalLabel, {}));
  for (std::size_t c = 0; c < spec.informative.size(); ++c)
    for (std::size_t i = 0; i < spec.cluster_size(); ++i)
      test.push_back(draw("cluster_" + std::to_string(c + 1), spec.informative[c]));
  std::vector<Row> train;
  train.reserve(spec.train_size());
  for (std::size_t i = 0; i < spec.train_size(); ++i) train.push_back(draw(kNormalLabel, {}));

  std::mt19937_64 shuffle_rng(derive_seed(spec.seed, 1));
  std::shuffle(test.begin(), test.end(), shuffle_rng);

  SyntheticData out{DataBatch(names, {}), DataBatch(names, {})};
  std::size_t next_id = 0;
  for (const auto& row : test)
    out.test.append_row(row.values, "s" + std::to_string(next_id++), row.label);
  for (const auto& row : train) out.train.append_row(row.values, "s" + std::to_string(next_id++));
  return out;
}

double threshold_error(const SyntheticSpec& spec, const DataBatch& test) {
  if (!test.has_labels()) throw DataQualityError("threshold_error needs a labelled batch");
  if (spec.informative.empty()) throw DomainError("spec has no clusters");
  const double threshold = spec.shift / 2.0;
  const bool upward = spec.shift >= 0.0;
  double total = 0.0;
  for (std::size_t c = 0; c < spec.informative.size(); ++c) {
    const std::size_t f = spec.informative[c];
    const std::string label = "cluster_" + std::to_string(c + 1);
    std::size_t normals = 0, false_alarms = 0, anomalies = 0, misses = 0;
    for (std::size_t r = 0; r < test.rows(); ++r) {
      const bool flagged = upward ? test.at(r, f) > threshold : test.at(r, f) < threshold;
      if (test.labels()[r] == kNormalLabel) {
        ++normals;
        false_alarms += flagged ? 1 : 0;
      } else if (test.labels()[r] == label) {
        ++anomalies;
        misses += flagged ? 0 : 1;
      }
    }
    if (normals == 0 || anomalies == 0) throw DataQualityError("batch lacks normal or " + label + " rows");
    total += 0.5 * (static_cast<double>(false_alarms) / static_cast<double>(normals) +
                    static_cast<double>(misses) / static_cast<double>(anomalies));
  }
  return total / static_cast<double>(spec.informative.size());
}

}  // namespace gad
