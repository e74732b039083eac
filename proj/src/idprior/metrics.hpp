#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "idprior/bayes.hpp"
#include "idprior/rng.hpp"

namespace idprior {

struct DistanceReport {
  double hellinger = 0.0;
  double hellinger_se = 0.0;
  double tv = 0.0;
  double tv_se = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_bootstrap = 0;
  double ess_a = 0.0;
  double ess_b = 0.0;
};

// Monte Carlo Hellinger/TV distances between two posteriors that share the
// prior, from the potentials evaluated on shared prior draws:
//   d_TV = 0.5 mean |wA/ZA - wB/ZB|,
//   d_H  = sqrt(0.5 mean (sqrt(wA/ZA) - sqrt(wB/ZB))^2),
// with w = exp(-Phi) self-normalized in log space. SEs by bootstrap over the
// shared draws. Throws NumericError when either weight set has effective
// sample size below 50.
DistanceReport distance_from_potentials(std::span<const double> potentials_a,
                                        std::span<const double> potentials_b,
                                        std::size_t n_bootstrap, Rng& rng);

// Convenience wrapper: draws from the problem's prior, evaluates both data
// vectors' potentials with common random numbers.
DistanceReport distance_estimate(const PosteriorProblem& problem, const Eigen::VectorXd& data_a,
                                 const Eigen::VectorXd& data_b, std::size_t n_samples,
                                 std::size_t n_bootstrap, Rng& rng);

struct StabilityRow {
  double delta = 0.0;
  double data_distance = 0.0;  // ||y - y'||
  DistanceReport report;
};

struct StabilityResult {
  std::vector<StabilityRow> rows;
  double hellinger_slope = 0.0;  // log d_H vs log ||y - y'||
  double tv_slope = 0.0;
};

// Perturbs the data along a unit direction by each delta and measures the
// posterior distances on one shared set of prior draws (common random
// numbers across all deltas).
StabilityResult stability_experiment(const PosteriorProblem& problem,
                                     const Eigen::VectorXd& direction,
                                     const std::vector<double>& deltas,
                                     std::size_t n_samples, std::size_t n_bootstrap, Rng& rng);

struct ConsistencyRow {
  std::size_t n_kept = 0;
  DistanceReport report;
  double tail_energy = 0.0;  // sum_{k>N} gamma_k^2
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  double slope_vs_tail = 0.0;  // log d_H vs log tail energy
};

// Distances between the full posterior and the projected-potential posterior
// Phi_N over the list of truncation levels, on shared prior draws.
ConsistencyResult consistency_experiment(const PosteriorProblem& problem,
                                         const std::vector<std::size_t>& n_list,
                                         std::size_t n_samples, std::size_t n_bootstrap,
                                         Rng& rng);

struct ExpectationGapReport {
  double gap = 0.0;          // |E_A h - E_B h|
  double bound = 0.0;        // 2 sqrt(E_A h^2 + E_B h^2) d_H
  bool holds = false;
  DistanceReport distances;
};

// Checks |E_A h - E_B h| <= 2 (E_A h^2 + E_B h^2)^{1/2} d_H with
// h(u) = ||u||^2 (squared grid norm), everything on shared prior draws.
ExpectationGapReport expectation_gap_check(const PosteriorProblem& problem,
                                           const Eigen::VectorXd& data_a,
                                           const Eigen::VectorXd& data_b,
                                           std::size_t n_samples, std::size_t n_bootstrap,
                                           Rng& rng);

}  // namespace idprior
