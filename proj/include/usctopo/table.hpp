#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace usctopo {

using Cell = std::variant<double, std::int64_t, std::string>;

// Long-format table: snake_case column names, one row per record.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::size_t column_index(const std::string& name) const;
  double number(std::size_t row, const std::string& column) const;
};

// 17 significant digits, so the text parses back to the identical double.
std::string format_double(double value);

std::string to_csv(const Table& table);
nlohmann::json to_json_records(const Table& table);

// Writes `path` and the sidecar `<path>.meta.json` holding `meta`.
void emit_csv(const Table& table, const std::filesystem::path& path, const nlohmann::json& meta);
void emit_json(const Table& table, const std::filesystem::path& path, const nlohmann::json& meta);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Minimal reader for the CSV files written above (quoted fields supported).
Table parse_csv(const std::string& text);

}  // namespace usctopo
