#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gad {

/// A T×D matrix of continuous feature vectors, row-major, with optional
/// per-row identifiers and ground-truth labels. Labels are only ever read by
/// evaluation code.
class DataBatch {
 public:
  DataBatch() = default;
  DataBatch(std::vector<std::string> feature_names, std::vector<double> values);

  std::size_t rows() const { return cols() == 0 ? 0 : values_.size() / cols(); }
  std::size_t cols() const { return feature_names_.size(); }
  bool empty() const { return rows() == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  std::vector<double> column(std::size_t j) const;

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<double>& values() const { return values_; }

  /// Row identifiers; when none were supplied, the decimal row index.
  std::string id(std::size_t i) const;
  const std::vector<std::string>& ids() const { return ids_; }
  void set_ids(std::vector<std::string> ids);

  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);

  void append_row(std::span<const double> values, std::string id = {}, std::string label = {});

  DataBatch select_rows(std::span<const std::size_t> rows) const;

  /// Throws DataQualityError naming the first non-finite cell.
  void require_finite() const;

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> values_;
  std::vector<std::string> ids_;
  std::vector<std::string> labels_;
};

}  // namespace gad
