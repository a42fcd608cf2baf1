#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "szilard/engine.hpp"

namespace szilard::io {

inline constexpr const char* kSchemaVersion = "1.0";

/// Shortest text that reads back to the same double, at most 17 significant
/// digits; locale independent.
std::string format_double(double v);

nlohmann::json to_json(const engine::CycleReport& report);
/// Inverse of to_json; throws ValidationError on a missing field or a
/// different schema version.
engine::CycleReport report_from_json(const nlohmann::json& j);

/// Pretty-printed JSON with a trailing newline. Same input gives the same bytes.
std::string dump(const nlohmann::json& j);

/// Minimal CSV builder: comma separated, header row, '.' decimals.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<std::string>>& data() const { return rows_; }
  std::string str() const;

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(long long v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "true" : "false"; }
  static std::string cell(const std::string& v);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// One row per sweep value with a stable column order; failed rows carry the
/// message in the `error` column and empty numbers.
CsvTable sweep_table(const std::vector<engine::SweepRow>& rows, engine::SweepAxis axis, std::uint64_t master_seed);

}  // namespace szilard::io
