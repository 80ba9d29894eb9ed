#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gad/data.hpp"

namespace gad {

/// Packet direction: client to server or server to client.
enum class Direction { cs, sc };

struct Packet {
  std::uint64_t size = 0;
  Direction direction = Direction::cs;
};

/// Data packets of one bidirectional flow after the TCP handshake.
struct FlowRecord {
  std::string flow_id;
  std::vector<Packet> packets;
  std::optional<std::string> label;
};

struct FlowFeatureVector {
  std::vector<double> values;  // 2N entries
  std::string flow_id;
  std::optional<std::string> label;
  /// The flow had no packets; values are all zero.
  bool empty = false;
};

/// Places the first `n` packet sizes into alternating direction slots
/// (lead, other, lead, ...). A packet whose direction does not match the
/// current slot leaves a zero in that slot and takes the next one. The result
/// is truncated or zero-padded to 2n entries. Throws DomainError if n == 0.
FlowFeatureVector featurize(const FlowRecord& flow, std::size_t n,
                            Direction lead = Direction::cs);

struct IngestError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct IngestResult {
  std::vector<FlowRecord> flows;
  std::vector<IngestError> errors;
};

/// Reads JSONL flows, one object per line:
///   {"flow_id": "...", "packets": [{"size": 60, "dir": "cs"}, ...], "label": "..."}
/// Blank lines are ignored. Malformed lines are recorded and skipped, or, when
/// `strict`, raise DataQualityError whose row() is the 1-based line number.
IngestResult ingest_flows(std::istream& in, bool strict = false);
/// Throws IoError if the file cannot be opened.
IngestResult ingest_flows(const std::filesystem::path& path, bool strict = false);

/// Batch with columns p1..p2N, flow ids, and labels when any flow has one.
DataBatch to_batch(const std::vector<FlowFeatureVector>& vectors, std::size_t n);

}  // namespace gad
