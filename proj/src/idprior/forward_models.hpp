#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <variant>
#include <vector>

#include "idprior/grid.hpp"
#include "idprior/rng.hpp"

namespace idprior {

// Periodic convolution under the uniform quadrature rule
//   (phi * u)(t_i) = (1/n) sum_j phi(t_i - t_j mod 1) u(t_j).
// This direct-sum definition is the wire contract: bit-exact given grids.
GridField circular_convolve(const GridField& u, const GridField& kernel);

// Periodic linear interpolation of the grid field at t in [0,1).
double sample_point(const GridField& u, double t);
std::vector<double> sample_points(const GridField& u, const std::vector<double>& points);

// Periodic Gaussian bump sum_{l=-3..3} exp(-(t+l)^2 / (2 w^2)), normalized to
// unit integral under the grid quadrature rule.
GridField gaussian_bump_kernel(std::size_t n_grid, double width);

// Deconvolution forward map G(u) = S(phi * u): point samples of the blurred
// field.
struct DeconvModel {
  GridField kernel;
  std::vector<double> obs_points;

  std::vector<double> apply(const GridField& u) const;
};

// Quadratic measurements y_j = |z_j^T S(u)|^2 of point values.
struct QuadModel {
  Eigen::MatrixXd sensing;  // m x n, rows z_j
  std::vector<double> obs_points;

  std::vector<double> apply(const GridField& u) const;

  // i.i.d. N(0, 1/n) sensing entries, the standard ensemble.
  static QuadModel random(std::size_t m, const std::vector<double>& obs_points, Rng& rng);
};

using ForwardModel = std::variant<DeconvModel, QuadModel>;

std::vector<double> forward_apply(const ForwardModel& model, const GridField& u);
bool forward_is_linear(const ForwardModel& model);
// Growth reference f~(x): x for linear models, x^2 for quadratic ones.
double forward_growth(const ForwardModel& model, double norm);

struct LipschitzReport {
  double max_lipschitz_ratio = 0.0;  // max ||G(u1)-G(u2)|| / ||u1-u2||
  double max_growth_ratio = 0.0;     // max ||G(u)|| / f~(||u||)
  std::size_t n_pairs = 0;
  double radius = 0.0;
};

// Empirical boundedness check over random smooth pairs with grid norm <= r.
LipschitzReport lipschitz_diagnostic(const ForwardModel& model, std::size_t n_grid,
                                     double radius, std::size_t n_pairs, Rng& rng);

}  // namespace idprior
