#include "gad/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gad/error.hpp"

namespace gad {
namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// strtod accepts "nan"/"inf", which from_chars in libstdc++ 11 also does, but
// strtod is the portable choice for the non-finite spellings.
bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  std::string owned(text);
  char* end = nullptr;
  out = std::strtod(owned.c_str(), &end);
  return end == owned.c_str() + owned.size();
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

DataBatch read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  auto header = split_line(line);
  int id_col = -1;
  int label_col = -1;
  std::vector<std::size_t> numeric_cols;
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string name(trim(header[c]));
    if (name == kIdColumn || name == kAltIdColumn) {
      id_col = static_cast<int>(c);
    } else if (name == kLabelColumn) {
      label_col = static_cast<int>(c);
    } else {
      numeric_cols.push_back(c);
      names.push_back(std::move(name));
    }
  }

  std::vector<double> values;
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataQualityError("row " + std::to_string(row) + " has " + std::to_string(cells.size()) +
                                 " cells, header has " + std::to_string(header.size()),
                             row);
    }
    for (std::size_t k = 0; k < numeric_cols.size(); ++k) {
      double v = 0.0;
      if (!parse_double(cells[numeric_cols[k]], v)) {
        throw DataQualityError("row " + std::to_string(row) + ", column '" + names[k] +
                                   "': not a number: '" + cells[numeric_cols[k]] + "'",
                               row, k);
      }
      values.push_back(v);
    }
    if (id_col >= 0) ids.emplace_back(trim(cells[id_col]));
    if (label_col >= 0) labels.emplace_back(trim(cells[label_col]));
    ++row;
  }
  DataBatch batch(std::move(names), std::move(values));
  if (id_col >= 0) batch.set_ids(std::move(ids));
  if (label_col >= 0) batch.set_labels(std::move(labels));
  return batch;
}

DataBatch read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in);
}

void write_csv(std::ostream& out, const DataBatch& batch, bool always_ids) {
  const bool with_ids = always_ids || !batch.ids().empty();
  const bool with_labels = batch.has_labels();
  std::vector<std::string> header = batch.feature_names();
  if (with_ids) header.emplace_back(kIdColumn);
  if (with_labels) header.emplace_back(kLabelColumn);
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';

  char buf[64];
  for (std::size_t i = 0; i < batch.rows(); ++i) {
    for (std::size_t j = 0; j < batch.cols(); ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, batch.at(i, j));
      out << (j ? "," : "") << std::string_view(buf, res.ptr - buf);
    }
    if (with_ids) out << ',' << (batch.ids().empty() ? std::string{} : quote_if_needed(batch.ids()[i]));
    if (with_labels) out << ',' << quote_if_needed(batch.labels()[i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const DataBatch& batch, bool always_ids) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(out, batch, always_ids);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace gad
