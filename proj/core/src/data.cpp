#include "gad/data.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gad/error.hpp"

namespace gad {

DataBatch::DataBatch(std::vector<std::string> feature_names, std::vector<double> values)
    : feature_names_(std::move(feature_names)), values_(std::move(values)) {
  if (feature_names_.empty() && !values_.empty())
    throw DataQualityError("batch has values but no columns");
  if (!feature_names_.empty() && values_.size() % feature_names_.size() != 0)
    throw DataQualityError("value count is not a multiple of the column count");
}

std::vector<double> DataBatch::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, j);
  return out;
}

std::string DataBatch::id(std::size_t i) const {
  if (i < ids_.size()) return ids_[i];
  return std::to_string(i);
}

void DataBatch::set_ids(std::vector<std::string> ids) {
  if (!ids.empty() && ids.size() != rows())
    throw DataQualityError("id count does not match row count");
  ids_ = std::move(ids);
}

void DataBatch::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != rows())
    throw DataQualityError("label count does not match row count");
  labels_ = std::move(labels);
}

void DataBatch::append_row(std::span<const double> row_values, std::string row_id,
                           std::string label) {
  if (row_values.size() != cols())
    throw DataQualityError("row width does not match column count", rows());
  const std::size_t before = rows();
  if (!row_id.empty() || !ids_.empty()) {
    while (ids_.size() < before) ids_.push_back(std::to_string(ids_.size()));
    ids_.push_back(row_id.empty() ? std::to_string(before) : std::move(row_id));
  }
  if (!label.empty() || !labels_.empty()) {
    labels_.resize(before);
    labels_.push_back(std::move(label));
  }
  values_.insert(values_.end(), row_values.begin(), row_values.end());
}

DataBatch DataBatch::select_rows(std::span<const std::size_t> selected) const {
  std::vector<double> values;
  values.reserve(selected.size() * cols());
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (std::size_t r : selected) {
    auto src = row(r);
    values.insert(values.end(), src.begin(), src.end());
    if (!ids_.empty()) ids.push_back(ids_[r]);
    if (!labels_.empty()) labels.push_back(labels_[r]);
  }
  DataBatch out(feature_names_, std::move(values));
  out.ids_ = std::move(ids);
  out.labels_ = std::move(labels);
  return out;
}

void DataBatch::require_finite() const {
  for (std::size_t i = 0; i < rows(); ++i) {
    for (std::size_t j = 0; j < cols(); ++j) {
      if (!std::isfinite(at(i, j))) {
        throw DataQualityError("non-finite value at row " + std::to_string(i) + ", column '" +
                                   feature_names_[j] + "'",
                               i, j);
      }
    }
  }
}

}  // namespace gad
