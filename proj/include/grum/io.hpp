#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "grum/types.hpp"

namespace grum {

/// Shortest decimal that round-trips a double (17 significant digits).
std::string format_double(double v);

/// Write-temp-then-rename so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

/// Emits agents.csv (agent_id,x1..xK; ids u<i>), alternatives.csv
/// (alt_id,z1..zL; ids a<j>) and rankings.csv (agent_id,ranking with the
/// ranking a `>`-joined list of alt ids, best first) into dir.
void write_profile(const Profile& profile, const std::filesystem::path& dir);

/// Inverse of write_profile; accepts arbitrary string ids. Indices follow
/// file row order. Schema violations name the file and line.
Profile load_profile(const std::filesystem::path& rankings_path,
                     const std::filesystem::path& agents_path,
                     const std::filesystem::path& alternatives_path);

/// param,value rows: delta_<j> then b_<k>_<l> row-major.
void write_parameters(const Parameters& params, const std::filesystem::path& path);
Parameters load_parameters(const std::filesystem::path& path);

void write_matrix_csv(const Eigen::MatrixXd& matrix, const std::filesystem::path& path);

} // namespace grum
