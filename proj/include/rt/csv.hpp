// Minimal RFC-4180-ish CSV reading/writing with locale-independent number
// formatting. All emitted tables are comma-delimited UTF-8 with a header row.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rt::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by exact header name; -1 when absent.
  int column(const std::string& name) const;
};

std::vector<std::string> split_line(const std::string& line);
Table read_file(const std::filesystem::path& path);

std::string quote(const std::string& field);
std::string join_row(const std::vector<std::string>& fields);
void write_file(const std::filesystem::path& path, const Table& table);

// Deterministic float formatting.
std::string fmt_money(double x);            // fixed, 2 decimals
std::string fmt_double(double x);           // %.12g
std::optional<double> parse_double(std::string_view s);

}  // namespace rt::csv
