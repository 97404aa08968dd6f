#include "ripple/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ripple/core/error.hpp"

namespace ripple {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Eigen::Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw std::invalid_argument("missing column '" + name + "' in " + source);
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

CsvTable parse_csv(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  CsvTable table;
  table.source = source;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw Error(source + ": missing header");
  table.header = split(line);
  std::set<std::string> seen;
  for (const auto& h : table.header) {
    if (h.empty()) throw Error(source + ": malformed header (empty column name) on line " + std::to_string(line_no));
    if (!seen.insert(h).second) throw Error(source + ": duplicated column '" + h + "' in header");
  }
  const std::size_t cols = table.header.size();
  std::vector<double> cells;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols) {
      throw Error(source + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                  " fields, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const std::string& f = fields[c];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(source + ": line " + std::to_string(line_no) + ", column '" + table.header[c] +
                    "': cannot parse '" + f + "'");
      }
      if (!std::isfinite(v)) {
        throw Error(source + ": line " + std::to_string(line_no) + ", column '" + table.header[c] +
                    "': non-finite value");
      }
      cells.push_back(v);
    }
    ++rows;
  }
  table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cells[r * cols + c];
    }
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.string());
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const Matrix& values) {
  if (static_cast<Eigen::Index>(header.size()) != values.cols()) {
    throw std::invalid_argument("write_csv: header/column count mismatch");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  std::string text;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text += ',';
    text += header[i];
  }
  text += '\n';
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) text += ',';
      text += format_double(values(r, c));
    }
    text += '\n';
  }
  out << text;
  if (!out) throw Error("error writing " + path.string());
}

}  // namespace ripple
