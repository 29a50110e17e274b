#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pavesat::csv {

/// A parsed CSV file: header plus string cells. RFC 4180 quoting is
/// honoured; blank lines are skipped.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string source;  // file name for error messages

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws FormatError naming the file when the column is missing.
  std::size_t column(std::string_view name) const;
  /// Throws FormatError naming the file and line when the cell is not a number.
  double number(std::size_t row, std::size_t col) const;
};

Table parse(std::istream& in, std::string source = "<stream>");
Table read(const std::filesystem::path& path);

std::string quote(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

}  // namespace pavesat::csv
