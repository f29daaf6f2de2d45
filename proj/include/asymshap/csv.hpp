#pragma once

#include <string>
#include <vector>

namespace asymshap {

/// Splits one CSV record; double quotes toggle quoting and are dropped.
std::vector<std::string> split_csv_line(const std::string& line);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name, or -1.
  int column(const std::string& name) const;
};

/// Reads a headered CSV; blank lines are skipped and every record must match the header width.
/// Throws IoError if the file cannot be opened, InvalidInput on malformed content.
CsvTable read_csv(const std::string& path);

/// Strict decimal parse of a whole cell; throws InvalidInput naming `where` on failure.
double parse_double(const std::string& cell, const std::string& where);

}  // namespace asymshap
