#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "idprior/bayes.hpp"
#include "idprior/rng.hpp"

namespace idprior {

struct McmcConfig {
  std::size_t n_steps = 10000;
  std::size_t burn_in = 1000;
  double proposal_scale = 0.5;  // multiplies gamma_k componentwise
  bool adapt = true;            // Robbins-Monro toward 0.3 acceptance, burn-in only
  std::size_t thinning = 1;

  void validate() const;
};

struct Chain {
  std::vector<std::vector<double>> samples;  // post burn-in, thinned
  std::vector<double> log_potentials;        // Phi at each stored sample
  double acceptance_rate = 0.0;
  double final_proposal_scale = 0.0;
};

// Metropolis-Hastings targeting the discretized posterior
//   pi(c) ~ exp(-Phi(u(c);y)) prod_k pdf_xi(c_k / gamma_k) / gamma_k.
// Coefficient laws with a density (G_{p,q}) use a componentwise random walk
// with per-coordinate scale proportional to gamma_k; atomic laws (compound
// Poisson) use prior-draw independence proposals, where the acceptance
// ratio reduces to the likelihood ratio.
Chain mh_sample(const PosteriorProblem& problem, const McmcConfig& config, Rng& rng);

struct MapConfig {
  std::size_t max_iterations = 200;
  double tolerance = 1e-10;      // on iterate change
  std::size_t multi_start = 8;   // extra random sparse starts for p < 1
  double weight_floor = 1e-10;   // IRLS stabilization delta
};

struct MapResult {
  Eigen::VectorXd solution;
  double objective = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

// minimize 0.5 sigma^{-2} ||A z - y||^2 + ||z||_p^p via iteratively
// reweighted least squares. For p < 1 the problem is nonconvex: zero,
// least-squares, and random sparse starts are tried and the best objective
// is returned ("best found" semantics, no global claim).
MapResult map_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma, double p,
                 const MapConfig& config, Rng& rng);

// minimize 0.5 sigma^{-2} ||A z - y||^2 + sum |z_k/alpha|^p
//          + (1-q) sum log(eps + |z_k|), the smoothed G_{p,q} MAP objective.
MapResult map_gpq_eps(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma,
                      double p, double q, double eps, const MapConfig& config, Rng& rng);

struct ChainSummary {
  std::vector<double> mean;
  std::vector<double> q05, q50, q95;
  std::vector<double> ess;  // per coordinate
  double acceptance_rate = 0.0;
};

ChainSummary posterior_summaries(const Chain& chain);

}  // namespace idprior
