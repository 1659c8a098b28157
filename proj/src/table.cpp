#include "usctopo/table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "usctopo/errors.hpp"

namespace usctopo {

namespace {

std::string csv_field(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  const auto& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  return path.string() + ".meta.json";
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw DimensionMismatch("row has " + std::to_string(row.size()) + " cells, table has " +
                            std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::size_t Table::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw DomainError("no column named '" + name + "'");
}

double Table::number(std::size_t row, const std::string& column) const {
  const auto& cell = rows.at(row).at(column_index(column));
  if (const auto* d = std::get_if<double>(&cell)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
  return std::stod(std::get<std::string>(cell));
}

std::string format_double(double value) {
  if (value == 0.0) return "0";  // folds -0 as well
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_field(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json_records(const Table& table) {
  auto records = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[table.columns[i]] = v; }, row[i]);
    }
    records.push_back(std::move(obj));
  }
  return records;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << content;
  os.close();
  if (!os) throw IoError("write failed for " + path.string());
}

void emit_csv(const Table& table, const std::filesystem::path& path, const nlohmann::json& meta) {
  write_text_file(path, to_csv(table));
  write_text_file(sidecar(path), meta.dump(2) + "\n");
}

void emit_json(const Table& table, const std::filesystem::path& path, const nlohmann::json& meta) {
  write_text_file(path, to_json_records(table).dump(1) + "\n");
  write_text_file(sidecar(path), meta.dump(2) + "\n");
}

Table parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(fields));
      fields.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !fields.empty()) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  Table table;
  if (lines.empty()) return table;
  table.columns = lines.front();
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::vector<Cell> row;
    for (auto& f : lines[r]) row.emplace_back(std::move(f));
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace usctopo
