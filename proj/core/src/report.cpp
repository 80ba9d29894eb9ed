#include "gad/report.hpp"

#include <fstream>

#include "gad/error.hpp"

namespace gad {

std::vector<std::string> DetectionReport::ranked_ids() const {
  std::vector<std::string> out;
  out.reserve(ranked_samples.size());
  for (std::size_t r : ranked_samples)
    out.push_back(r < sample_ids.size() ? sample_ids[r] : std::to_string(r));
  return out;
}

nlohmann::json DetectionReport::to_json() const {
  using nlohmann::json;
  json clusters_json = json::array();
  for (const auto& c : clusters) {
    json orders = json::array();
    for (const auto& o : c.order_best)
      orders.push_back({{"order", o.order}, {"features", o.features}, {"log_score", o.log_score}});
    clusters_json.push_back({{"features", c.features},
                             {"samples", c.samples},
                             {"log_score", c.log_score},
                             {"per_sample_log_p", c.per_sample_log_p},
                             {"order_best", std::move(orders)}});
  }
  return {{"format", "gad-detection-report"},
          {"version", 1},
          {"method", method},
          {"clusters", std::move(clusters_json)},
          {"ranked_samples", ranked_samples},
          {"sample_ids", sample_ids}};
}

DetectionReport DetectionReport::from_json(const nlohmann::json& doc) {
  try {
    DetectionReport r;
    r.method = doc.value("method", std::string{});
    for (const auto& c : doc.at("clusters")) {
      ClusterCandidate cc;
      cc.features = c.at("features").get<std::vector<std::size_t>>();
      cc.samples = c.at("samples").get<std::vector<std::size_t>>();
      cc.log_score = c.at("log_score").get<double>();
      cc.per_sample_log_p = c.at("per_sample_log_p").get<std::vector<double>>();
      if (c.contains("order_best")) {
        for (const auto& o : c.at("order_best"))
          cc.order_best.push_back({o.at("order").get<std::size_t>(),
                                   o.at("features").get<std::vector<std::size_t>>(),
                                   o.at("log_score").get<double>()});
      }
      r.clusters.push_back(std::move(cc));
    }
    r.ranked_samples = doc.at("ranked_samples").get<std::vector<std::size_t>>();
    r.sample_ids = doc.value("sample_ids", std::vector<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataQualityError(std::string("malformed detection report: ") + e.what());
  }
}

void DetectionReport::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << to_json().dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

DetectionReport DetectionReport::load(const std::filesystem::path& path) {
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

}  // namespace gad
