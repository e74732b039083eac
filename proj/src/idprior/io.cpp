#include "idprior/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "idprior/errors.hpp"
#include "idprior/levy_process.hpp"

namespace idprior {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_series_csv(const std::filesystem::path& file, const std::vector<double>& values,
                      std::size_t n_terms, std::size_t n_grid, std::uint64_t seed) {
  std::ostringstream out;
  out << "n,n_grid,seed\n"
      << n_terms << ',' << n_grid << ',' << seed << "\n"
      << "value\n";
  for (double v : values) out << format_double(v) << '\n';
  write_text_file(file, out.str());
}

std::vector<double> read_series_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InvalidArgument("cannot open " + file.string());
  std::string line;
  std::getline(in, line);  // metadata header
  std::getline(in, line);  // metadata values
  std::getline(in, line);  // column header
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    values.push_back(std::stod(line));
  }
  return values;
}

void write_path_csv(const std::filesystem::path& file, const JumpPath& path) {
  std::ostringstream out;
  out << "time,size\n";
  for (std::size_t i = 0; i < path.times.size(); ++i)
    out << format_double(path.times[i]) << ',' << format_double(path.sizes[i]) << '\n';
  write_text_file(file, out.str());
}

void write_field2d_csv(const std::filesystem::path& file, const GridField2D& field) {
  std::ostringstream out;
  out << "n\n" << field.n << '\n';
  for (std::size_t i = 0; i < field.n; ++i) {
    for (std::size_t j = 0; j < field.n; ++j) {
      if (j) out << ',';
      out << format_double(field.at(i, j));
    }
    out << '\n';
  }
  write_text_file(file, out.str());
}

void write_table_csv(const std::filesystem::path& file,
                     const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out << ',';
    out << columns[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw InvalidArgument("write_table_csv: ragged row");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  write_text_file(file, out.str());
}

void write_text_file(const std::filesystem::path& file, const std::string& content) {
  std::ofstream out(file, std::ios::binary);  // LF endings everywhere
  if (!out) throw InvalidArgument("cannot write " + file.string());
  out << content;
}

std::string read_text_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace idprior
