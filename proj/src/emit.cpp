#include "qrm2/emit.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace qrm2 {

std::string to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat output_format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format: " + s);
}

std::string format_significant(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<double>(cell)) {
    return format_significant(std::get<double>(cell));
  }
  if (std::holds_alternative<long long>(cell)) {
    return std::to_string(std::get<long long>(cell));
  }
  if (std::holds_alternative<bool>(cell)) {
    return std::get<bool>(cell) ? "true" : "false";
  }
  return std::get<std::string>(cell);
}

}  // namespace

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(table.columns[i]);
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("render_csv: ragged row");
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cell_text(row[i]));
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::invalid_argument("render_json: ragged row");
    }
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& cell = row[i];
      if (std::holds_alternative<double>(cell)) {
        obj[table.columns[i]] = std::get<double>(cell);  // NaN serializes as null
      } else if (std::holds_alternative<long long>(cell)) {
        obj[table.columns[i]] = std::get<long long>(cell);
      } else if (std::holds_alternative<bool>(cell)) {
        obj[table.columns[i]] = std::get<bool>(cell);
      } else {
        obj[table.columns[i]] = std::get<std::string>(cell);
      }
    }
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string render_table(const Table& table, OutputFormat format) {
  return format == OutputFormat::Csv ? render_csv(table) : render_json(table);
}

void write_output(const std::string& content, const std::string& path) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed writing output file: " + path);
  }
}

}  // namespace qrm2
