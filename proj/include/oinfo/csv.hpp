#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace oinfo::csv {

struct Options {
  char delimiter = ',';
  /// Present/Absent force the choice. Auto treats the first row as a header
  /// when any of its fields is not a number.
  enum class Header { Auto, Present, Absent } header = Header::Auto;
};

struct Table {
  std::vector<std::string> header;           // empty when absent
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;     // 1-based source line per row
};

/// Reads a delimited text file. Blank lines and lines starting with '#' are
/// skipped. Fields are trimmed of surrounding whitespace and double quotes.
Table read(const std::filesystem::path& path, const Options& options = {});

/// Strict double parse; throws ParseError naming line and column.
double parse_double(std::string_view field, std::size_t line, std::size_t column);

bool looks_numeric(std::string_view field);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double value);

/// Writes `contents` to `path` through a temporary file and rename.
void write_atomically(const std::filesystem::path& path, std::string_view contents);

}  // namespace oinfo::csv
