#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ripple/core/linalg.hpp"

namespace ripple {

// A numeric CSV table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;

  // Index of a named column; throws std::invalid_argument naming the column
  // (and the file, if known) when it is absent.
  Eigen::Index column(const std::string& name) const;
  bool has_column(const std::string& name) const;

  std::string source;  // file path, for error messages
};

// Parses a comma-separated numeric table. Errors name the offending line:
// empty or duplicated header fields, ragged rows, unparsable or non-finite
// cells.
CsvTable read_csv(const std::filesystem::path& path);
CsvTable parse_csv(const std::string& text, const std::string& source = "<memory>");

// Writes with 17 significant digits, which round-trips doubles exactly.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Matrix& values);

std::string format_double(double v);

}  // namespace ripple
