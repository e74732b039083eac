#include "idprior/inference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "idprior/errors.hpp"
#include "idprior/stats.hpp"

namespace idprior {

void McmcConfig::validate() const {
  if (burn_in >= n_steps) throw InvalidArgument("McmcConfig: burn_in must be < n_steps");
  if (proposal_scale <= 0.0) throw InvalidArgument("McmcConfig: proposal scale must be positive");
  if (thinning == 0) throw InvalidArgument("McmcConfig: thinning must be >= 1");
}

namespace {

double log_prior_density(const ProductPriorSpec& prior, const std::vector<double>& c) {
  double lp = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k)
    lp += prior.law.log_pdf(c[k] / prior.weights.values[k]);
  return lp;
}

Chain mh_random_walk(const PosteriorProblem& problem, const McmcConfig& config, Rng& rng) {
  const auto& gamma = problem.prior.weights.values;
  std::vector<double> c = sample_coefficients(problem.prior, rng);
  double phi = coeff_potential(problem, c);
  double lp = log_prior_density(problem.prior, c);

  Chain chain;
  double log_scale = std::log(config.proposal_scale);
  std::size_t accepted_burn_in = 0, accepted = 0, counted = 0;
  std::vector<double> proposal(c.size());

  for (std::size_t step = 0; step < config.n_steps; ++step) {
    bool in_burn_in = step < config.burn_in;
    double scale = std::exp(log_scale);
    for (std::size_t k = 0; k < c.size(); ++k)
      proposal[k] = c[k] + scale * gamma[k] * rng.normal();
    double phi_prop = coeff_potential(problem, proposal);
    double lp_prop = log_prior_density(problem.prior, proposal);
    double log_ratio = (lp_prop - phi_prop) - (lp - phi);
    bool accept = std::log(rng.uniform()) < log_ratio;
    if (accept) {
      c = proposal;
      phi = phi_prop;
      lp = lp_prop;
    }
    if (in_burn_in) {
      accepted_burn_in += accept ? 1 : 0;
      if (config.adapt) {
        // Robbins-Monro toward 0.3 acceptance; frozen after burn-in.
        double eta = 1.0 / std::pow(1.0 + static_cast<double>(step), 0.6);
        log_scale += eta * ((accept ? 1.0 : 0.0) - 0.3);
      }
      if (step + 1 == config.burn_in && accepted_burn_in == 0)
        throw NumericError("mh_sample: zero acceptance over burn-in");
    } else {
      accepted += accept ? 1 : 0;
      ++counted;
      if ((step - config.burn_in) % config.thinning == 0) {
        chain.samples.push_back(c);
        chain.log_potentials.push_back(phi);
      }
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(counted);
  chain.final_proposal_scale = std::exp(log_scale);
  return chain;
}

Chain mh_independence(const PosteriorProblem& problem, const McmcConfig& config, Rng& rng) {
  std::vector<double> c = sample_coefficients(problem.prior, rng);
  double phi = coeff_potential(problem, c);

  Chain chain;
  std::size_t accepted_burn_in = 0, accepted = 0, counted = 0;
  for (std::size_t step = 0; step < config.n_steps; ++step) {
    auto proposal = sample_coefficients(problem.prior, rng);
    double phi_prop = coeff_potential(problem, proposal);
    // Prior proposal: the ratio reduces to the likelihood ratio.
    bool accept = std::log(rng.uniform()) < phi - phi_prop;
    if (accept) {
      c = std::move(proposal);
      phi = phi_prop;
    }
    if (step < config.burn_in) {
      accepted_burn_in += accept ? 1 : 0;
      if (step + 1 == config.burn_in && accepted_burn_in == 0)
        throw NumericError("mh_sample: zero acceptance over burn-in");
    } else {
      accepted += accept ? 1 : 0;
      ++counted;
      if ((step - config.burn_in) % config.thinning == 0) {
        chain.samples.push_back(c);
        chain.log_potentials.push_back(phi);
      }
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(counted);
  chain.final_proposal_scale = 0.0;
  return chain;
}

}  // namespace

Chain mh_sample(const PosteriorProblem& problem, const McmcConfig& config, Rng& rng) {
  config.validate();
  if (problem.prior.law.has_density()) return mh_random_walk(problem, config, rng);
  return mh_independence(problem, config, rng);
}

namespace {

double lp_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma,
                    double p, const Eigen::VectorXd& z) {
  double r = (a * z - y).squaredNorm() / (2.0 * sigma * sigma);
  double pen = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) pen += std::pow(std::abs(z(k)), p);
  return r + pen;
}

double gpq_eps_objective(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma,
                         double p, double q, double eps, double alpha,
                         const Eigen::VectorXd& z) {
  double r = (a * z - y).squaredNorm() / (2.0 * sigma * sigma);
  double pen = 0.0;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    double az = std::abs(z(k));
    pen += std::pow(az / alpha, p) + (1.0 - q) * std::log(eps + az);
  }
  return r + pen;
}

struct IrlsProblem {
  const Eigen::MatrixXd& a;
  const Eigen::VectorXd& y;
  double sigma;
  std::function<double(const Eigen::VectorXd&)> objective;
  std::function<double(double)> weight;  // quadratic majorizer weight at |z_k|
};

MapResult irls_from(const IrlsProblem& prob, Eigen::VectorXd z, const MapConfig& config) {
  const double inv_s2 = 1.0 / (prob.sigma * prob.sigma);
  const Eigen::MatrixXd ata = inv_s2 * (prob.a.transpose() * prob.a);
  const Eigen::VectorXd aty = inv_s2 * (prob.a.transpose() * prob.y);
  const auto n = z.size();

  MapResult result;
  double obj = prob.objective(z);
  for (std::size_t it = 0; it < config.max_iterations; ++it) {
    Eigen::MatrixXd sys = ata;
    for (Eigen::Index k = 0; k < n; ++k)
      sys(k, k) += 2.0 * prob.weight(std::max(std::abs(z(k)), config.weight_floor));
    Eigen::VectorXd z_new = sys.ldlt().solve(aty);
    double obj_new = prob.objective(z_new);
    result.iterations = it + 1;
    if (obj_new > obj + 1e-9 * (1.0 + std::abs(obj))) break;  // floor artifact: stop
    double step = (z_new - z).lpNorm<Eigen::Infinity>();
    z = std::move(z_new);
    obj = obj_new;
    if (step < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.solution = std::move(z);
  result.objective = obj;
  return result;
}

MapResult irls_multi_start(const IrlsProblem& prob, bool nonconvex, const MapConfig& config,
                           Rng& rng) {
  const auto n = prob.a.cols();
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(n));
  // Regularized least-squares start.
  Eigen::MatrixXd reg = prob.a.transpose() * prob.a +
                        1e-8 * Eigen::MatrixXd::Identity(n, n);
  starts.push_back(reg.ldlt().solve(prob.a.transpose() * prob.y));
  if (nonconvex) {
    for (std::size_t s = 0; s < config.multi_start; ++s) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
      for (int j = 0; j < 5; ++j) {
        auto idx = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
        z(std::min(idx, n - 1)) = rng.normal();
      }
      starts.push_back(std::move(z));
    }
  }
  MapResult best;
  bool first = true;
  for (auto& z0 : starts) {
    MapResult r = irls_from(prob, std::move(z0), config);
    if (first || r.objective < best.objective) {
      best = std::move(r);
      first = false;
    }
  }
  return best;
}

}  // namespace

MapResult map_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma, double p,
                 const MapConfig& config, Rng& rng) {
  if (!(p > 0.0 && p <= 2.0)) throw InvalidArgument("map_lp: p must be in (0,2]");
  if (sigma <= 0.0) throw InvalidArgument("map_lp: sigma must be positive");
  IrlsProblem prob{a, y, sigma,
                   [&](const Eigen::VectorXd& z) { return lp_objective(a, y, sigma, p, z); },
                   [p](double az) { return 0.5 * p * std::pow(az, p - 2.0); }};
  return irls_multi_start(prob, p < 1.0, config, rng);
}

MapResult map_gpq_eps(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, double sigma,
                      double p, double q, double eps, const MapConfig& config, Rng& rng) {
  if (!(p > 0.0 && p <= 2.0)) throw InvalidArgument("map_gpq_eps: p must be in (0,2]");
  if (!(q <= 1.0)) throw InvalidArgument("map_gpq_eps: q must be <= 1");
  if (!(eps > 0.0)) throw InvalidArgument("map_gpq_eps: eps must be positive");
  if (sigma <= 0.0) throw InvalidArgument("map_gpq_eps: sigma must be positive");
  const double alpha = GpqParams::create(p, q).alpha;
  IrlsProblem prob{
      a, y, sigma,
      [&](const Eigen::VectorXd& z) {
        return gpq_eps_objective(a, y, sigma, p, q, eps, alpha, z);
      },
      [p, q, eps, alpha](double az) {
        // Majorizers: |z/alpha|^p by the standard power bound, log(eps+|z|)
        // by tangent-line + |z| <= z^2/(2|z0|) + |z0|/2.
        return 0.5 * p * std::pow(alpha, -p) * std::pow(az, p - 2.0) +
               (1.0 - q) / (2.0 * az * (eps + az));
      }};
  return irls_multi_start(prob, true, config, rng);
}

ChainSummary posterior_summaries(const Chain& chain) {
  if (chain.samples.empty()) throw InvalidArgument("posterior_summaries: empty chain");
  const std::size_t dim = chain.samples.front().size();
  const std::size_t len = chain.samples.size();
  ChainSummary summary;
  summary.acceptance_rate = chain.acceptance_rate;
  summary.mean.resize(dim);
  summary.q05.resize(dim);
  summary.q50.resize(dim);
  summary.q95.resize(dim);
  summary.ess.resize(dim);
  std::vector<double> coord(len);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t i = 0; i < len; ++i) coord[i] = chain.samples[i][k];
    summary.mean[k] = mean(coord);
    summary.q05[k] = quantile(coord, 0.05);
    summary.q50[k] = quantile(coord, 0.50);
    summary.q95[k] = quantile(coord, 0.95);
    summary.ess[k] = chain_ess(coord);
  }
  return summary;
}

}  // namespace idprior
