#include "idprior/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "idprior/errors.hpp"

namespace idprior {

double mean(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw InvalidArgument("variance needs at least two points");
  double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double standard_error(std::span<const double> x) {
  return std::sqrt(variance(x) / static_cast<double>(x.size()));
}

double log_sum_exp(std::span<const double> x) {
  if (x.empty()) throw InvalidArgument("log_sum_exp of empty vector");
  double m = *std::max_element(x.begin(), x.end());
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double v : x) s += std::exp(v - m);
  return m + std::log(s);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InvalidArgument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_statistic_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= t) ++i;
    while (j < b.size() && b[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double trimmed_abs_mean(std::span<const double> x, double trim_fraction,
                        const std::function<double(double)>& h) {
  std::vector<double> hx(x.size());
  std::transform(x.begin(), x.end(), hx.begin(), h);
  std::sort(hx.begin(), hx.end());
  auto keep = static_cast<std::size_t>(
      std::llround((1.0 - trim_fraction) * static_cast<double>(hx.size())));
  keep = std::max<std::size_t>(1, std::min(keep, hx.size()));
  return std::accumulate(hx.begin(), hx.begin() + static_cast<std::ptrdiff_t>(keep), 0.0) /
         static_cast<double>(keep);
}

SlopeFit fit_line(std::span<const double> x, std::span<const double> y,
                  std::span<const double> w) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("fit_line: bad sizes");
  std::vector<double> ones;
  if (w.empty()) {
    ones.assign(x.size(), 1.0);
    w = ones;
  }
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  double denom = sw * sxx - sx * sx;
  SlopeFit fit;
  fit.slope = (sw * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / sw;
  return fit;
}

double importance_ess(std::span<const double> weights) {
  double s = 0.0, s2 = 0.0;
  for (double v : weights) {
    s += v;
    s2 += v * v;
  }
  if (s2 <= 0.0) return 0.0;
  return s * s / s2;
}

double chain_ess(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) return 1.0;
  double m = mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0) return 1.0;  // constant chain
  double rho_sum = 0.0;
  for (std::size_t lag = 1; lag < n; ++lag) {
    double c = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) c += (x[i] - m) * (x[i + lag] - m);
    c /= static_cast<double>(n);
    double rho = c / c0;
    if (rho < 0.0) break;
    rho_sum += rho;
    if (lag > 1000) break;  // long-memory guard
  }
  double ess = static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
  return std::max(1.0, ess);
}

double quantile(std::vector<double> x, double prob) {
  if (x.empty()) throw InvalidArgument("quantile of empty sample");
  prob = std::clamp(prob, 0.0, 1.0);
  std::sort(x.begin(), x.end());
  double pos = prob * static_cast<double>(x.size() - 1);
  auto lo = static_cast<std::size_t>(pos);
  auto hi = std::min(lo + 1, x.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return x[lo] * (1.0 - frac) + x[hi] * frac;
}

}  // namespace idprior
