#pragma once

#include <cstddef>
#include <vector>

#include "idprior/rng.hpp"

namespace idprior {

// Symmetric unit-variance shrinkage family with density
//   pi(t) = p / (2 alpha Gamma(q/p)) |t/alpha|^{q-1} exp(-|t/alpha|^p).
// The scale alpha = sqrt(Gamma(q/p)/Gamma((2+q)/p)) is derived, never set:
// it normalizes the variance to 1. (p,1) is the generalized-normal l_p
// family; (p,p) the symmetrized Weibull.
struct GpqParams {
  double p;
  double q;
  double alpha;  // derived

  static GpqParams create(double p, double q);
};

// Natural log of the density. For q < 1 the density diverges at the origin;
// returns +inf at t == 0 exactly (integrable singularity).
double gpq_log_pdf(const GpqParams& params, double t);

// s-th moment E xi^s; zero for odd s by symmetry.
double gpq_moment(const GpqParams& params, unsigned s);

// CDF via the regularized incomplete gamma function:
//   P(|xi| <= t) = gamma_p(q/p, (t/alpha)^p).
double gpq_cdf(const GpqParams& params, double t);

// i.i.d. draws via the gamma-power transform: (|xi|/alpha)^p ~ Gamma(q/p, 1),
// with an independent random sign.
std::vector<double> gpq_sample(const GpqParams& params, std::size_t n, Rng& rng);
double gpq_sample_one(const GpqParams& params, Rng& rng);

}  // namespace idprior
