#include "idprior/gpq.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "idprior/errors.hpp"

namespace idprior {

GpqParams GpqParams::create(double p, double q) {
  if (!(p > 0.0) || !(q > 0.0)) throw InvalidArgument("GpqParams: p and q must be positive");
  // alpha = sqrt(Gamma(q/p) / Gamma((2+q)/p)), computed in log space.
  double log_alpha = 0.5 * (std::lgamma(q / p) - std::lgamma((2.0 + q) / p));
  return GpqParams{p, q, std::exp(log_alpha)};
}

double gpq_log_pdf(const GpqParams& params, double t) {
  if (!std::isfinite(t)) throw InvalidArgument("gpq_log_pdf: non-finite t");
  const double p = params.p, q = params.q, a = params.alpha;
  if (t == 0.0) {
    if (q < 1.0) return std::numeric_limits<double>::infinity();
    if (q > 1.0) return -std::numeric_limits<double>::infinity();
    return std::log(p / (2.0 * a)) - std::lgamma(q / p);  // q = 1: finite
  }
  double r = std::abs(t) / a;
  return std::log(p / (2.0 * a)) - std::lgamma(q / p) + (q - 1.0) * std::log(r) -
         std::pow(r, p);
}

double gpq_moment(const GpqParams& params, unsigned s) {
  if (s % 2 == 1) return 0.0;
  const double p = params.p, q = params.q, a = params.alpha;
  // alpha^s Gamma((s+q)/p) / Gamma(q/p), in log space for large s.
  double lg = static_cast<double>(s) * std::log(a) +
              std::lgamma((static_cast<double>(s) + q) / p) - std::lgamma(q / p);
  return std::exp(lg);
}

double gpq_cdf(const GpqParams& params, double t) {
  if (!std::isfinite(t)) return t > 0 ? 1.0 : 0.0;
  double r = std::pow(std::abs(t) / params.alpha, params.p);
  double half_mass = 0.5 * boost::math::gamma_p(params.q / params.p, r);
  return t >= 0.0 ? 0.5 + half_mass : 0.5 - half_mass;
}

double gpq_sample_one(const GpqParams& params, Rng& rng) {
  double g = rng.gamma(params.q / params.p);
  return rng.sign() * params.alpha * std::pow(g, 1.0 / params.p);
}

std::vector<double> gpq_sample(const GpqParams& params, std::size_t n, Rng& rng) {
  if (n == 0) throw InvalidArgument("gpq_sample: n must be >= 1");
  std::vector<double> out(n);
  for (auto& v : out) v = gpq_sample_one(params, rng);
  return out;
}

}  // namespace idprior
