#pragma once

#include <string>
#include <variant>
#include <vector>

namespace qrm2 {

enum class OutputFormat { Csv, Json };

std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& s);

// 12 significant digits; NaN renders as "nan" (CSV) / null (JSON).
std::string format_significant(double v);

using Cell = std::variant<double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// RFC-4180-style quoting, LF line endings, header row, byte-deterministic.
std::string render_csv(const Table& t);
// Array of objects with the column names as keys, NaN mapped to null.
std::string render_json(const Table& t);
std::string render_table(const Table& t, OutputFormat format);

// Writes content to path; "-" writes to stdout. I/O failures carry the path.
void write_output(const std::string& content, const std::string& path);

}  // namespace qrm2
