#include "ripple/io/tables.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ripple/core/error.hpp"
#include "ripple/io/csv.hpp"

namespace ripple {

LogisticData load_logistic_table(const std::filesystem::path& path, Eigen::Index p) {
  const CsvTable t = read_csv(path);
  LogisticData d;
  const Eigen::Index n = t.values.rows();
  d.y = t.values.col(t.column("y"));
  d.x.resize(n, p);
  d.x.col(0).setOnes();
  for (Eigen::Index j = 1; j < p; ++j) d.x.col(j) = t.values.col(t.column("x" + std::to_string(j)));
  return d;
}

void write_logistic_table(const LogisticData& data, const std::filesystem::path& path) {
  std::vector<std::string> header{"y"};
  Matrix values(data.y.size(), data.x.cols());
  values.col(0) = data.y;
  for (Eigen::Index j = 1; j < data.x.cols(); ++j) {
    header.push_back("x" + std::to_string(j));
    values.col(j) = data.x.col(j);
  }
  write_csv(path, header, values);
}

Matrix load_conjugate_table(const std::filesystem::path& path, Eigen::Index p) {
  const CsvTable t = read_csv(path);
  Matrix out(t.values.rows(), p);
  for (Eigen::Index j = 0; j < p; ++j) out.col(j) = t.values.col(t.column("y" + std::to_string(j + 1)));
  return out;
}

void write_conjugate_table(const Matrix& observations, const std::filesystem::path& path) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < observations.cols(); ++j) header.push_back("y" + std::to_string(j + 1));
  write_csv(path, header, observations);
}

SdmData load_sdm_tables(const std::filesystem::path& sites, const std::filesystem::path& reflectances,
                        int predictors) {
  const CsvTable s = read_csv(sites);
  const CsvTable r = read_csv(reflectances);
  SdmData data;
  const Eigen::Index id_col = s.column("site_id");
  const bool has_z = s.has_column("z_true");
  data.sites.resize(static_cast<std::size_t>(s.values.rows()));
  for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
    if (s.values(i, id_col) != static_cast<double>(i)) {
      throw Error(sites.string() + ": site_id must run 0..S-1 in order (row " + std::to_string(i + 2) + ")");
    }
    SdmSite& site = data.sites[static_cast<std::size_t>(i)];
    site.x.resize(predictors);
    site.x(0) = 1.0;
    for (int j = 1; j < predictors; ++j) site.x(j) = s.values(i, s.column("x" + std::to_string(j)));
    if (has_z) site.z_true = static_cast<int>(s.values(i, s.column("z_true")));
  }
  const Eigen::Index rs = r.column("site_id");
  const Eigen::Index rw = r.column("wavelength");
  const Eigen::Index rd = r.column("day");
  const Eigen::Index rr = r.column("r_logit");
  for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
    const double id = r.values(i, rs);
    if (id < 0 || id >= static_cast<double>(data.sites.size()) || id != std::floor(id)) {
      throw Error(reflectances.string() + ": unknown site_id on line " + std::to_string(i + 2));
    }
    data.sites[static_cast<std::size_t>(id)].records.push_back({r.values(i, rr), r.values(i, rw), r.values(i, rd)});
  }
  return data;
}

void write_sdm_tables(const SdmData& data, const std::filesystem::path& sites,
                      const std::filesystem::path& reflectances) {
  const Eigen::Index p = data.sites.empty() ? 1 : data.sites.front().x.size();
  const bool has_z = !data.sites.empty() && data.sites.front().z_true.has_value();
  std::vector<std::string> header{"site_id"};
  for (Eigen::Index j = 1; j < p; ++j) header.push_back("x" + std::to_string(j));
  if (has_z) header.push_back("z_true");
  Matrix sv(static_cast<Eigen::Index>(data.sites.size()), static_cast<Eigen::Index>(header.size()));
  std::size_t records = 0;
  for (std::size_t i = 0; i < data.sites.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    sv(row, 0) = static_cast<double>(i);
    for (Eigen::Index j = 1; j < p; ++j) sv(row, j) = data.sites[i].x(j);
    if (has_z) sv(row, p) = static_cast<double>(data.sites[i].z_true.value_or(-1));
    records += data.sites[i].records.size();
  }
  write_csv(sites, header, sv);
  Matrix rv(static_cast<Eigen::Index>(records), 4);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < data.sites.size(); ++i) {
    for (const ReflectanceRecord& rec : data.sites[i].records) {
      rv(k, 0) = static_cast<double>(i);
      rv(k, 1) = rec.w;
      rv(k, 2) = rec.d;
      rv(k, 3) = rec.r;
      ++k;
    }
  }
  write_csv(reflectances, {"site_id", "wavelength", "day", "r_logit"}, rv);
}

void write_truth(const std::vector<std::string>& names, const Vector& natural_values,
                 const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << "parameter,value\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << names[i] << ',' << format_double(natural_values(static_cast<Eigen::Index>(i))) << '\n';
  }
}

Vector read_truth(const std::filesystem::path& path, const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  std::map<std::string, double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(path.string() + ": malformed line " + std::to_string(line_no));
    try {
      values[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    } catch (const std::logic_error&) {
      throw Error(path.string() + ": cannot parse value on line " + std::to_string(line_no));
    }
  }
  Vector out(static_cast<Eigen::Index>(names.size()));
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto it = values.find(names[i]);
    if (it == values.end()) throw Error(path.string() + ": missing parameter '" + names[i] + "'");
    out(static_cast<Eigen::Index>(i)) = it->second;
  }
  return out;
}

}  // namespace ripple
