#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "idprior/forward_models.hpp"
#include "idprior/product_prior.hpp"
#include "idprior/rng.hpp"

namespace idprior {

// Observation noise covariance; diagonal sigma^2 I in all experiments, but
// any SPD matrix is accepted. ||x||_Sigma = ||Sigma^{-1/2} x||_2.
class NoiseSpec {
 public:
  NoiseSpec() = default;  // empty; assign before use

  static NoiseSpec isotropic(double sigma2, std::size_t m);
  static NoiseSpec general(Eigen::MatrixXd covariance);

  double sigma_norm(const Eigen::VectorXd& x) const;
  std::size_t dim() const { return static_cast<std::size_t>(cov_.rows()); }
  const Eigen::MatrixXd& covariance() const { return cov_; }

 private:
  Eigen::MatrixXd cov_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

// Prior + forward model + noise + data: the unit of inference and of
// distance experiments. Coefficients live in the prior's basis; fields are
// synthesized on an n_grid circle grid.
struct PosteriorProblem {
  ProductPriorSpec prior;
  ForwardModel forward;
  NoiseSpec noise;
  Eigen::VectorXd data;
  std::size_t n_grid = 256;

  GridField synthesize_coeffs(const std::vector<double>& coefficients) const;
};

// Phi(u; y) = 0.5 ||G(u) - y||_Sigma^2.
double gaussian_potential(const PosteriorProblem& problem, const GridField& u);
double gaussian_potential(const PosteriorProblem& problem, const GridField& u,
                          const Eigen::VectorXd& y);

double coeff_potential(const PosteriorProblem& problem, const std::vector<double>& coefficients);

// Phi_N: the potential of the first N coefficients only (coefficient-space
// projection P_N; N = 0 gives Phi(0; y)).
double projected_potential(const PosteriorProblem& problem,
                           const std::vector<double>& coefficients, std::size_t n_keep);

struct EvidenceEstimate {
  double value = 0.0;
  double se = 0.0;
  double log_value = 0.0;
  std::size_t n_samples = 0;
};

// Self-normalized prior Monte Carlo of Z(y) = E_prior exp(-Phi), with all
// weight arithmetic in log space.
EvidenceEstimate evidence_estimate(const PosteriorProblem& problem, std::size_t n_samples,
                                   Rng& rng);

}  // namespace idprior
