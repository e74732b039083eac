#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace idprior {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double standard_error(std::span<const double> x);

// log(sum(exp(x_i))) guarded against overflow.
double log_sum_exp(std::span<const double> x);

// One-sample Kolmogorov-Smirnov statistic against a CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// Mean after removing the top `trim_fraction` of |x|.
double trimmed_abs_mean(std::span<const double> x, double trim_fraction,
                        const std::function<double(double)>& h);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Weighted least-squares line fit; weights default to 1.
SlopeFit fit_line(std::span<const double> x, std::span<const double> y,
                  std::span<const double> w = {});

// Effective sample size of importance weights: (sum w)^2 / sum w^2.
double importance_ess(std::span<const double> weights);

// Autocorrelation-based effective sample size, truncated at the first
// negative autocorrelation lag.
double chain_ess(std::span<const double> x);

double quantile(std::vector<double> x, double prob);

}  // namespace idprior
