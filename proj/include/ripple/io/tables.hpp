#pragma once

#include <filesystem>

#include "ripple/models/conjugate.hpp"
#include "ripple/models/logistic.hpp"
#include "ripple/models/sdm.hpp"

namespace ripple {

// Logistic table: columns y, x1..x{P-1}; the intercept is implied.
LogisticData load_logistic_table(const std::filesystem::path& path, Eigen::Index p);
void write_logistic_table(const LogisticData& data, const std::filesystem::path& path);

// Conjugate table: columns y1..yP.
Matrix load_conjugate_table(const std::filesystem::path& path, Eigen::Index p);
void write_conjugate_table(const Matrix& observations, const std::filesystem::path& path);

// SDM: sites (site_id, x1..x{P-1}, optional z_true) and reflectances
// (site_id, wavelength, day, r_logit). site_id runs 0..S-1 in the sites file.
SdmData load_sdm_tables(const std::filesystem::path& sites, const std::filesystem::path& reflectances,
                        int predictors);
void write_sdm_tables(const SdmData& data, const std::filesystem::path& sites,
                      const std::filesystem::path& reflectances);

// Truth file: columns parameter,value with values on the natural scale.
void write_truth(const std::vector<std::string>& names, const Vector& natural_values,
                 const std::filesystem::path& path);
Vector read_truth(const std::filesystem::path& path, const std::vector<std::string>& names);

}  // namespace ripple
