#include "idprior/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "idprior/errors.hpp"
#include "idprior/stats.hpp"

namespace idprior {

namespace {

// Normalized importance weights a_i = w_i / mean(w), computed around the
// maximum so only ratios are exponentiated.
std::vector<double> normalized_weights(std::span<const double> potentials) {
  std::vector<double> neg(potentials.size());
  for (std::size_t i = 0; i < potentials.size(); ++i) neg[i] = -potentials[i];
  double log_z = log_sum_exp(neg) - std::log(static_cast<double>(neg.size()));
  std::vector<double> a(neg.size());
  for (std::size_t i = 0; i < neg.size(); ++i) a[i] = std::exp(neg[i] - log_z);
  return a;
}

struct RawDistances {
  double tv;
  double hellinger;
};

RawDistances distances_on(const std::vector<double>& wa, const std::vector<double>& wb,
                          const std::vector<std::size_t>& idx) {
  // Self-normalize within the (re)sample.
  double sa = 0.0, sb = 0.0;
  for (std::size_t i : idx) {
    sa += wa[i];
    sb += wb[i];
  }
  const double n = static_cast<double>(idx.size());
  sa /= n;
  sb /= n;
  double tv = 0.0, h2 = 0.0;
  for (std::size_t i : idx) {
    double a = wa[i] / sa;
    double b = wb[i] / sb;
    tv += std::abs(a - b);
    double d = std::sqrt(a) - std::sqrt(b);
    h2 += d * d;
  }
  return {0.5 * tv / n, std::sqrt(0.5 * h2 / n)};
}

}  // namespace

DistanceReport distance_from_potentials(std::span<const double> potentials_a,
                                        std::span<const double> potentials_b,
                                        std::size_t n_bootstrap, Rng& rng) {
  if (potentials_a.size() != potentials_b.size() || potentials_a.empty())
    throw InvalidArgument("distance_from_potentials: mismatched potential vectors");
  const std::size_t n = potentials_a.size();
  auto wa = normalized_weights(potentials_a);
  auto wb = normalized_weights(potentials_b);

  DistanceReport report;
  report.n_samples = n;
  report.n_bootstrap = n_bootstrap;
  report.ess_a = importance_ess(wa);
  report.ess_b = importance_ess(wb);
  if (report.ess_a < 50.0 || report.ess_b < 50.0)
    throw NumericError("distance estimate unreliable: importance ESS below 50 (ess_a=" +
                       std::to_string(report.ess_a) + ", ess_b=" +
                       std::to_string(report.ess_b) + ")");

  std::vector<std::size_t> identity(n);
  for (std::size_t i = 0; i < n; ++i) identity[i] = i;
  auto point = distances_on(wa, wb, identity);
  report.tv = point.tv;
  report.hellinger = point.hellinger;

  if (n_bootstrap > 1) {
    std::vector<double> tvs(n_bootstrap), hs(n_bootstrap);
    std::vector<std::size_t> idx(n);
    for (std::size_t b = 0; b < n_bootstrap; ++b) {
      for (auto& i : idx)
        i = std::min<std::size_t>(n - 1, static_cast<std::size_t>(rng.uniform() * n));
      auto d = distances_on(wa, wb, idx);
      tvs[b] = d.tv;
      hs[b] = d.hellinger;
    }
    report.tv_se = std::sqrt(variance(tvs));
    report.hellinger_se = std::sqrt(variance(hs));
  }
  return report;
}

namespace {

// Forward outputs of shared prior draws, one row per draw. Linear models get
// a basis-response fast path: G(u(c)) = B c with B_jk = G(x_k).
struct SharedDraws {
  std::vector<std::vector<double>> coefficients;
  Eigen::MatrixXd outputs;        // n_draws x m
  std::vector<double> h_norm2;    // squared coefficient l2 norm per draw
  Eigen::MatrixXd basis_response; // m x N, linear models only
  bool linear = false;
};

SharedDraws make_shared_draws(const PosteriorProblem& problem, std::size_t n_samples,
                              Rng& rng) {
  SharedDraws draws;
  draws.linear = forward_is_linear(problem.forward);
  const std::size_t n_terms = problem.prior.n_terms();
  const auto m = static_cast<Eigen::Index>(problem.noise.dim());

  if (draws.linear) {
    draws.basis_response.resize(m, static_cast<Eigen::Index>(n_terms));
    std::vector<double> unit(n_terms, 0.0);
    for (std::size_t k = 0; k < n_terms; ++k) {
      unit[k] = 1.0;
      auto g = forward_apply(problem.forward, problem.synthesize_coeffs(unit));
      for (Eigen::Index j = 0; j < m; ++j)
        draws.basis_response(j, static_cast<Eigen::Index>(k)) = g[static_cast<std::size_t>(j)];
      unit[k] = 0.0;
    }
  }

  draws.coefficients.resize(n_samples);
  draws.outputs.resize(static_cast<Eigen::Index>(n_samples), m);
  draws.h_norm2.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    draws.coefficients[i] = sample_coefficients(problem.prior, rng);
    const auto& c = draws.coefficients[i];
    double h = 0.0;
    for (double ck : c) h += ck * ck;
    draws.h_norm2[i] = h;
    if (draws.linear) {
      Eigen::Map<const Eigen::VectorXd> cv(c.data(), static_cast<Eigen::Index>(c.size()));
      draws.outputs.row(static_cast<Eigen::Index>(i)) =
          (draws.basis_response * cv).transpose();
    } else {
      auto g = forward_apply(problem.forward, problem.synthesize_coeffs(c));
      for (Eigen::Index j = 0; j < m; ++j)
        draws.outputs(static_cast<Eigen::Index>(i), j) = g[static_cast<std::size_t>(j)];
    }
  }
  return draws;
}

std::vector<double> potentials_for_data(const SharedDraws& draws, const PosteriorProblem& problem,
                                        const Eigen::VectorXd& y) {
  std::vector<double> phi(static_cast<std::size_t>(draws.outputs.rows()));
  for (Eigen::Index i = 0; i < draws.outputs.rows(); ++i) {
    double r = problem.noise.sigma_norm(draws.outputs.row(i).transpose() - y);
    phi[static_cast<std::size_t>(i)] = 0.5 * r * r;
  }
  return phi;
}

double weighted_log_slope(const std::vector<double>& x, const std::vector<double>& d,
                          const std::vector<double>& se) {
  std::vector<double> lx, ld, w;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d[i] <= 0.0 || x[i] <= 0.0) continue;
    lx.push_back(std::log(x[i]));
    ld.push_back(std::log(d[i]));
    double rel = se[i] > 0.0 ? se[i] / d[i] : 1e-3;
    w.push_back(1.0 / (rel * rel));
  }
  if (lx.size() < 2) throw NumericError("slope fit: fewer than two usable points");
  return fit_line(lx, ld, w).slope;
}

}  // namespace

DistanceReport distance_estimate(const PosteriorProblem& problem, const Eigen::VectorXd& data_a,
                                 const Eigen::VectorXd& data_b, std::size_t n_samples,
                                 std::size_t n_bootstrap, Rng& rng) {
  auto draws = make_shared_draws(problem, n_samples, rng);
  auto phi_a = potentials_for_data(draws, problem, data_a);
  auto phi_b = potentials_for_data(draws, problem, data_b);
  return distance_from_potentials(phi_a, phi_b, n_bootstrap, rng);
}

StabilityResult stability_experiment(const PosteriorProblem& problem,
                                     const Eigen::VectorXd& direction,
                                     const std::vector<double>& deltas,
                                     std::size_t n_samples, std::size_t n_bootstrap, Rng& rng) {
  if (deltas.empty()) throw InvalidArgument("stability_experiment: empty delta list");
  Eigen::VectorXd e = direction;
  if (e.norm() <= 0.0) throw InvalidArgument("stability_experiment: zero direction");
  e /= e.norm();

  auto draws = make_shared_draws(problem, n_samples, rng);
  auto phi_base = potentials_for_data(draws, problem, problem.data);

  StabilityResult result;
  std::vector<double> xs, ds, ses;
  for (double delta : deltas) {
    if (delta < 0.0) throw InvalidArgument("stability_experiment: negative delta");
    Eigen::VectorXd y_prime = problem.data + delta * e;
    auto phi_prime = potentials_for_data(draws, problem, y_prime);
    StabilityRow row;
    row.delta = delta;
    row.data_distance = (y_prime - problem.data).norm();
    row.report = distance_from_potentials(phi_base, phi_prime, n_bootstrap, rng);
    xs.push_back(row.data_distance);
    ds.push_back(row.report.hellinger);
    ses.push_back(row.report.hellinger_se);
    result.rows.push_back(std::move(row));
  }
  result.hellinger_slope = weighted_log_slope(xs, ds, ses);
  std::vector<double> tvs, tv_ses;
  for (const auto& row : result.rows) {
    tvs.push_back(row.report.tv);
    tv_ses.push_back(row.report.tv_se);
  }
  result.tv_slope = weighted_log_slope(xs, tvs, tv_ses);
  return result;
}

ConsistencyResult consistency_experiment(const PosteriorProblem& problem,
                                         const std::vector<std::size_t>& n_list,
                                         std::size_t n_samples, std::size_t n_bootstrap,
                                         Rng& rng) {
  const std::size_t full = problem.prior.n_terms();
  for (std::size_t n_keep : n_list)
    if (n_keep > full) throw InvalidArgument("consistency_experiment: N exceeds truncation");

  auto draws = make_shared_draws(problem, n_samples, rng);
  auto phi_full = potentials_for_data(draws, problem, problem.data);

  // Tail energies of the materialized weight sequence.
  const auto& gamma = problem.prior.weights.values;
  auto tail_from = [&gamma](std::size_t n_keep) {
    double s = 0.0;
    for (std::size_t k = n_keep; k < gamma.size(); ++k) s += gamma[k] * gamma[k];
    return s;
  };

  ConsistencyResult result;
  std::vector<double> tails, ds, ses;
  for (std::size_t n_keep : n_list) {
    std::vector<double> phi_n(draws.coefficients.size());
    if (n_keep == full) {
      phi_n = phi_full;
    } else if (draws.linear) {
      // G(P_N u) = B[:, :N] c[:N] = G(u) - B[:, N:] c[N:]
      const auto m = draws.outputs.cols();
      for (std::size_t i = 0; i < draws.coefficients.size(); ++i) {
        const auto& c = draws.coefficients[i];
        Eigen::VectorXd g = draws.outputs.row(static_cast<Eigen::Index>(i)).transpose();
        for (std::size_t k = n_keep; k < c.size(); ++k)
          if (c[k] != 0.0)
            g -= c[k] * draws.basis_response.col(static_cast<Eigen::Index>(k));
        (void)m;
        double r = problem.noise.sigma_norm(g - problem.data);
        phi_n[i] = 0.5 * r * r;
      }
    } else {
      for (std::size_t i = 0; i < draws.coefficients.size(); ++i)
        phi_n[i] = projected_potential(problem, draws.coefficients[i], n_keep);
    }
    ConsistencyRow row;
    row.n_kept = n_keep;
    row.tail_energy = tail_from(n_keep);
    row.report = distance_from_potentials(phi_full, phi_n, n_bootstrap, rng);
    tails.push_back(row.tail_energy);
    ds.push_back(row.report.hellinger);
    ses.push_back(row.report.hellinger_se);
    result.rows.push_back(std::move(row));
  }
  bool fittable = std::count_if(ds.begin(), ds.end(), [](double d) { return d > 0.0; }) >= 2;
  result.slope_vs_tail = fittable ? weighted_log_slope(tails, ds, ses) : 0.0;
  return result;
}

ExpectationGapReport expectation_gap_check(const PosteriorProblem& problem,
                                           const Eigen::VectorXd& data_a,
                                           const Eigen::VectorXd& data_b,
                                           std::size_t n_samples, std::size_t n_bootstrap,
                                           Rng& rng) {
  auto draws = make_shared_draws(problem, n_samples, rng);
  auto phi_a = potentials_for_data(draws, problem, data_a);
  auto phi_b = potentials_for_data(draws, problem, data_b);

  ExpectationGapReport report;
  report.distances = distance_from_potentials(phi_a, phi_b, n_bootstrap, rng);

  auto wa = normalized_weights(phi_a);
  auto wb = normalized_weights(phi_b);
  const double n = static_cast<double>(wa.size());
  double ea = 0.0, eb = 0.0, ea2 = 0.0, eb2 = 0.0;
  for (std::size_t i = 0; i < wa.size(); ++i) {
    double h = draws.h_norm2[i];
    ea += wa[i] * h;
    eb += wb[i] * h;
    ea2 += wa[i] * h * h;
    eb2 += wb[i] * h * h;
  }
  ea /= n;
  eb /= n;
  ea2 /= n;
  eb2 /= n;
  report.gap = std::abs(ea - eb);
  report.bound = 2.0 * std::sqrt(ea2 + eb2) * report.distances.hellinger;
  report.holds = report.gap <= report.bound;
  return report;
}

}  // namespace idprior
