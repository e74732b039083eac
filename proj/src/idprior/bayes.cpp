#include "idprior/bayes.hpp"

#include <algorithm>
#include <cmath>

#include "idprior/errors.hpp"
#include "idprior/stats.hpp"

namespace idprior {

NoiseSpec NoiseSpec::isotropic(double sigma2, std::size_t m) {
  if (sigma2 <= 0.0) throw InvalidArgument("NoiseSpec: sigma2 must be positive");
  return general(sigma2 *
                 Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(m),
                                           static_cast<Eigen::Index>(m)));
}

NoiseSpec NoiseSpec::general(Eigen::MatrixXd covariance) {
  NoiseSpec spec;
  spec.llt_.compute(covariance);
  if (spec.llt_.info() != Eigen::Success)
    throw InvalidArgument("NoiseSpec: covariance is not symmetric positive definite");
  spec.cov_ = std::move(covariance);
  return spec;
}

double NoiseSpec::sigma_norm(const Eigen::VectorXd& x) const {
  if (x.size() != cov_.rows()) throw InvalidArgument("sigma_norm: dimension mismatch");
  // ||L^{-1} x||_2 with cov = L L^T
  Eigen::VectorXd w = llt_.matrixL().solve(x);
  return w.norm();
}

GridField PosteriorProblem::synthesize_coeffs(const std::vector<double>& coefficients) const {
  return synthesize(prior, coefficients, n_grid);
}

double gaussian_potential(const PosteriorProblem& problem, const GridField& u) {
  return gaussian_potential(problem, u, problem.data);
}

double gaussian_potential(const PosteriorProblem& problem, const GridField& u,
                          const Eigen::VectorXd& y) {
  auto g = forward_apply(problem.forward, u);
  Eigen::Map<const Eigen::VectorXd> gv(g.data(), static_cast<Eigen::Index>(g.size()));
  double r = problem.noise.sigma_norm(gv - y);
  return 0.5 * r * r;
}

double coeff_potential(const PosteriorProblem& problem,
                       const std::vector<double>& coefficients) {
  return gaussian_potential(problem, problem.synthesize_coeffs(coefficients));
}

double projected_potential(const PosteriorProblem& problem,
                           const std::vector<double>& coefficients, std::size_t n_keep) {
  if (n_keep > coefficients.size())
    throw InvalidArgument("projected_potential: N exceeds coefficient length");
  std::vector<double> truncated(coefficients.begin(),
                                coefficients.begin() + static_cast<std::ptrdiff_t>(n_keep));
  truncated.resize(coefficients.size(), 0.0);
  return coeff_potential(problem, truncated);
}

EvidenceEstimate evidence_estimate(const PosteriorProblem& problem, std::size_t n_samples,
                                   Rng& rng) {
  if (n_samples < 1000) throw InvalidArgument("evidence_estimate: n_samples >= 1000");
  std::vector<double> neg_phi(n_samples);
  for (auto& v : neg_phi) {
    auto c = sample_coefficients(problem.prior, rng);
    v = -coeff_potential(problem, c);
  }
  double lse = log_sum_exp(neg_phi);
  if (!std::isfinite(lse))
    throw NumericError(
        "evidence_estimate: all prior weights underflowed; log-sum-exp path exhausted");
  EvidenceEstimate est;
  est.n_samples = n_samples;
  est.log_value = lse - std::log(static_cast<double>(n_samples));
  est.value = std::exp(est.log_value);
  // SE of the plain weight mean, computed stably around the max weight.
  std::vector<double> w(n_samples);
  double m = *std::max_element(neg_phi.begin(), neg_phi.end());
  for (std::size_t i = 0; i < n_samples; ++i) w[i] = std::exp(neg_phi[i] - m);
  est.se = standard_error(w) * std::exp(m);
  if (!(est.value > 0.0))
    throw NumericError("evidence_estimate: estimate is not strictly positive");
  return est;
}

}  // namespace idprior
