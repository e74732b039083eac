#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace idprior {

// Uniformly sampled function on the unit circle (circumference-1
// parameterization): values at t_i = i/n, i = 0..n-1.
struct GridField {
  std::vector<double> v;

  std::size_t size() const { return v.size(); }
  double spacing() const { return 1.0 / static_cast<double>(v.size()); }
  double point(std::size_t i) const { return static_cast<double>(i) * spacing(); }

  double l2_norm() const;  // sqrt((1/n) sum v_i^2), the grid L^2 norm
};

// n x n field on the unit square, cell-centered: t_ij = ((i+0.5)/n, (j+0.5)/n),
// row-major storage.
struct GridField2D {
  std::size_t n = 0;
  std::vector<double> v;

  double& at(std::size_t i, std::size_t j) { return v[i * n + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * n + j]; }
  double spacing() const { return 1.0 / static_cast<double>(n); }
};

}  // namespace idprior
