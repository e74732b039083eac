#pragma once

#include <cstddef>
#include <vector>

#include "idprior/grid.hpp"
#include "idprior/id_law.hpp"
#include "idprior/rng.hpp"

namespace idprior {

// Compound Poisson sample path on [0,1], cadlag: u(0) = 0,
// u(t) = sum of sizes with time <= t. Times strictly increasing in (0,1].
struct JumpPath {
  std::vector<double> times;
  std::vector<double> sizes;

  double value_at(double t) const;
};

// Jump count tau(1) ~ Poisson(rate); jump times are uniform order statistics
// on (0,1]; sizes i.i.d. from jump_law. The order-statistics construction is
// part of the contract: seeds reproduce only under this construction.
JumpPath sample_cpp_path(double rate, const JumpLaw& jump_law, Rng& rng);

// Total variation of the piecewise-constant path: sum |jump sizes|, exact.
double path_tv(const JumpPath& path);

// sup_t |u(t)| over the piecewise-constant levels; always <= path_tv.
double path_sup_norm(const JumpPath& path);

// Path values on the uniform grid t_i = i/n.
GridField rasterize(const JumpPath& path, std::size_t n);

// Squared-exponential Gaussian process kappa(r,s) = exp(-b |r-s|^2) on a
// uniform grid, sampled through a jittered Cholesky factor. The factor is
// cached per spec; reads after first use are safe concurrently.
struct GpSpec {
  double bandwidth = 1.0;  // b
  std::size_t n = 128;     // grid points
  double jitter = 1e-10;   // initial diagonal regularizer
};

GridField sample_gp(const GpSpec& spec, Rng& rng);
GridField2D sample_gp_2d(const GpSpec& spec, Rng& rng);

// v(t) = g(t) + u(t) with independent GP g and compound Poisson path u.
GridField sample_hybrid_path(const GpSpec& gp, double rate, const JumpLaw& jump_law, Rng& rng);

// 2D BV field: u(t) = S_{tau(g+(t))} where g is a GP draw on the square,
// tau counts one shared Poisson(rate) arrival stream on [0, max g+], and
// S_j are cumulative sums of i.i.d. jumps. Piecewise constant across the
// positive level sets of g. arrival_count, when non-null, receives tau(max g+).
GridField2D sample_bv_field_2d(const GpSpec& gp, double rate, const JumpLaw& jump_law,
                               Rng& rng, std::size_t* arrival_count = nullptr);

// 1D: sum |u_{i+1} - u_i| (non-periodic forward differences).
double discrete_variation(const GridField& field);
// 2D: sum h (|d+x u| + |d+y u|), anisotropic forward differences; exact for
// axis-aligned steps on the cell-centered grid.
double discrete_variation(const GridField2D& field);

// Total contour length of {field = level} by marching squares with linear
// interpolation; finiteness sanity diagnostic only.
double level_set_perimeter_estimate(const GridField2D& field, double level);

}  // namespace idprior
