#pragma once

#include <filesystem>
#include <iosfwd>

#include "gad/data.hpp"

namespace gad {

/// Column names with special meaning; every other column must be numeric.
inline constexpr const char* kIdColumn = "flow_id";
inline constexpr const char* kAltIdColumn = "id";
inline constexpr const char* kLabelColumn = "label";

/// Reads a header-first CSV into a batch. `flow_id`/`id` and `label` columns are
/// kept as strings; empty or unparseable numeric cells raise DataQualityError
/// with the zero-based data row and column. Non-finite numbers are parsed and
/// left for DataBatch::require_finite to reject.
DataBatch read_csv(std::istream& in);
DataBatch read_csv(const std::filesystem::path& path);

/// Writes numeric columns, then `flow_id`, then `label` when present.
// always_ids writes the id column even when the batch carries no ids (e.g. empty batches).
void write_csv(std::ostream& out, const DataBatch& batch, bool always_ids = false);
void write_csv(const std::filesystem::path& path, const DataBatch& batch, bool always_ids = false);

}  // namespace gad
