#include "gad/flowfeat.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "gad/error.hpp"

namespace gad {

namespace {

Direction other(Direction d) { return d == Direction::cs ? Direction::sc : Direction::cs; }

Direction parse_direction(const std::string& text) {
  if (text == "cs" || text == "CS") return Direction::cs;
  if (text == "sc" || text == "SC") return Direction::sc;
  throw DomainError("direction must be \"cs\" or \"sc\", got \"" + text + "\"");
}

FlowRecord parse_flow(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DomainError("line is not a JSON object");
  FlowRecord flow;
  const auto& id = doc.at("flow_id");
  if (id.is_string())
    flow.flow_id = id.get<std::string>();
  else if (id.is_number_integer())
    flow.flow_id = id.dump();
  else
    throw DomainError("flow_id must be a string or integer");

  const auto& packets = doc.at("packets");
  if (!packets.is_array()) throw DomainError("packets must be an array");
  for (std::size_t i = 0; i < packets.size(); ++i) {
    const auto& p = packets[i];
    const auto& size = p.at("size");
    if (!size.is_number_integer() || size.get<std::int64_t>() <= 0)
      throw DomainError("packet " + std::to_string(i) + ": size must be a positive integer");
    flow.packets.push_back({size.get<std::uint64_t>(), parse_direction(p.at("dir").get<std::string>())});
  }
  if (doc.contains("label") && !doc.at("label").is_null())
    flow.label = doc.at("label").get<std::string>();
  return flow;
}

}  // namespace

FlowFeatureVector featurize(const FlowRecord& flow, std::size_t n, Direction lead) {
  if (n == 0) throw DomainError("featurize: N must be at least 1");
  FlowFeatureVector out;
  out.flow_id = flow.flow_id;
  out.label = flow.label;
  out.values.assign(2 * n, 0.0);
  out.empty = flow.packets.empty();

  std::size_t slot = 0;
  Direction expected = lead;
  for (std::size_t i = 0; i < flow.packets.size() && i < n; ++i) {
    const Packet& p = flow.packets[i];
    if (p.direction != expected) {
      ++slot;
      expected = other(expected);
    }
    out.values[slot] = static_cast<double>(p.size);
    ++slot;
    expected = other(expected);
  }
  return out;
}

IngestResult ingest_flows(std::istream& in, bool strict) {
  IngestResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      result.flows.push_back(parse_flow(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      std::string message = e.what();
      if (strict)
        throw DataQualityError("line " + std::to_string(number) + ": " + message, number);
      result.errors.push_back({number, std::move(message)});
    }
  }
  return result;
}

IngestResult ingest_flows(const std::filesystem::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return ingest_flows(in, strict);
}

DataBatch to_batch(const std::vector<FlowFeatureVector>& vectors, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= 2 * n; ++i) names.push_back("p" + std::to_string(i));
  DataBatch batch(std::move(names), {});
  bool labelled = false;
  for (const auto& v : vectors) labelled = labelled || v.label.has_value();
  for (const auto& v : vectors) {
    if (v.values.size() != 2 * n)
      throw DomainError("feature vector for flow '" + v.flow_id + "' has the wrong width");
    batch.append_row(v.values, v.flow_id, labelled ? v.label.value_or("") : std::string{});
  }
  return batch;
}

}  // namespace gad
