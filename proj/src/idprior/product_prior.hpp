#pragma once

#include <cstddef>
#include <complex>
#include <utility>
#include <vector>

#include "idprior/gpq.hpp"
#include "idprior/grid.hpp"
#include "idprior/rng.hpp"

namespace idprior {

enum class BasisKind { haar_periodic, fourier_real };

// Orthonormal basis of L^2 on the unit circle, truncated at max_terms.
//
// haar_periodic enumerates x_1 = scaling function, x_2 = mother wavelet,
// x_{2^j + n + 1} = v_{j,n} for j >= 1, n in {0..2^j-1} where
// v_{j,n}(t) = 2^{j/2} vtilde(2^j t - n) periodized.
//
// fourier_real enumerates x_1 = 1, x_{2m} = sqrt(2) cos(2 pi m t),
// x_{2m+1} = sqrt(2) sin(2 pi m t): the real/imaginary parts of the complex
// exponentials in frequency order 0, 1, -1, 2, -2, ...
struct BasisSpec {
  BasisKind kind = BasisKind::haar_periodic;
  std::size_t max_terms = 0;
};

// x_k(t), 1-based k, t in [0,1).
double basis_eval(const BasisSpec& basis, std::size_t k, double t);

enum class WeightRule { wavelet_sobolev, fourier_power };

// Square-summable decay sequence gamma_k, materialized to length N.
//   wavelet_sobolev: gamma_{2^j+n+1} = (1 + |2^{j+1}|^2)^{-1/2}
//   fourier_power:   gamma_k = (1 + |freq(k)|^2)^{-s/2}
struct WeightSequence {
  WeightRule rule = WeightRule::wavelet_sobolev;
  double exponent = 3.0;  // s, fourier_power only
  std::vector<double> values;

  static WeightSequence make(WeightRule rule, std::size_t n, double exponent = 3.0);

  // sum_{k=1..n} gamma_k^2 of the materialized sequence.
  double energy() const;
  // Analytic-series remainder sum_{k>N} gamma_k^2 (computed by extending the
  // rule far past N until the increments are negligible).
  double tail_energy() const;
};

struct CoeffLaw {
  enum class Kind { gpq, cpois_laplace };
  Kind kind = Kind::gpq;
  GpqParams gpq = GpqParams::create(2.0, 1.0);
  double rate = 1.0;  // compound Poisson rate, cpois_laplace only

  static CoeffLaw make_gpq(double p, double q);
  static CoeffLaw make_cpois_laplace(double rate);

  double variance() const;            // 1 for gpq; 2*rate for cpois_laplace
  bool has_density() const;           // cpois has an atom at 0
  double log_pdf(double x) const;     // gpq only
  double sample_one(Rng& rng) const;
  std::complex<double> char_fn(double s) const;
};

// Truncated function-space prior u = sum_k gamma_k xi_k x_k.
struct ProductPriorSpec {
  BasisSpec basis;
  WeightSequence weights;
  CoeffLaw law;

  static ProductPriorSpec make(BasisKind kind, std::size_t n_terms, CoeffLaw law,
                               WeightRule rule, double exponent = 3.0);
  std::size_t n_terms() const { return basis.max_terms; }
};

// One draw of the weighted coefficients (gamma_k xi_k), length N.
std::vector<double> sample_coefficients(const ProductPriorSpec& spec, Rng& rng);

// u(t_i) = sum_k c_k x_k(t_i) on the uniform grid t_i = i/n_grid. For the
// Haar basis, n_grid must be a power of two >= 2N so every wavelet is
// constant on each grid cell (Parseval then holds exactly).
GridField synthesize(const ProductPriorSpec& spec, const std::vector<double>& coefficients,
                     std::size_t n_grid);

struct MomentEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Monte Carlo estimate of E ||u||_{L^2}^2 = sum gamma_k^2 E xi^2.
MomentEstimate second_moment_estimate(const ProductPriorSpec& spec, std::size_t n_samples,
                                      Rng& rng);

// Characteristic function of the functional rho(u) = sum rho_k c_k for a
// finite list of (1-based index, weight) pairs. Analytic for the
// cpois_laplace and Gaussian coefficient laws; the compound Poisson inner
// expectation E[cos(gamma_k rho_k xi) - 1] is evaluated by quadrature.
std::complex<double> product_char_fn(const ProductPriorSpec& spec,
                                     const std::vector<std::pair<std::size_t, double>>& functional);

std::complex<double> empirical_product_char_fn(
    const ProductPriorSpec& spec,
    const std::vector<std::pair<std::size_t, double>>& functional, std::size_t n_samples,
    Rng& rng);

struct CompressibilityRow {
  double threshold = 0.0;
  double fraction_below = 0.0;
};

// Fraction of weighted coefficients with |c_k| < eps, per threshold, pooled
// over draws.
std::vector<CompressibilityRow> compressibility_report(
    const std::vector<std::vector<double>>& coefficient_samples,
    const std::vector<double>& thresholds);

}  // namespace idprior
