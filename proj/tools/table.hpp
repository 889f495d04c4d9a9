#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace cvdj::cli {

enum class Format { kCsv, kJson };

/// Column-ordered result table. Cells are JSON values; CSV renders floats with
/// 17 significant digits, JSON with the shortest round-trip representation.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// Cells missing from `row` are written as empty (CSV) or null (JSON).
  void add_row(nlohmann::ordered_json row) { rows_.push_back(std::move(row)); }

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<nlohmann::ordered_json>& rows() const { return rows_; }

  void write(std::ostream& os, Format format) const;

 private:
  std::vector<std::string> columns_;
  std::vector<nlohmann::ordered_json> rows_;
};

std::string format_double(double v);

}  // namespace cvdj::cli
