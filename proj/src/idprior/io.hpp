#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "idprior/grid.hpp"

namespace idprior {

struct JumpPath;

// Shortest round-trip decimal representation; used everywhere numbers are
// serialized so reruns are byte-identical.
std::string format_double(double x);

// One value per line under a "value" column; leading comment-free metadata
// header "n,n_grid,seed".
void write_series_csv(const std::filesystem::path& file, const std::vector<double>& values,
                      std::size_t n_terms, std::size_t n_grid, std::uint64_t seed);
std::vector<double> read_series_csv(const std::filesystem::path& file);

void write_path_csv(const std::filesystem::path& file, const JumpPath& path);

void write_field2d_csv(const std::filesystem::path& file, const GridField2D& field);

// Generic rectangular table with a header row.
void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows);

void write_text_file(const std::filesystem::path& file, const std::string& content);
std::string read_text_file(const std::filesystem::path& file);

}  // namespace idprior
