#include "idprior/product_prior.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "idprior/errors.hpp"
#include "idprior/id_law.hpp"
#include "idprior/stats.hpp"

namespace idprior {

namespace {

// Level/shift decomposition of a 1-based Haar index k >= 2: k = 2^j + n + 1.
std::pair<int, std::size_t> haar_level(std::size_t k) {
  std::size_t idx = k - 1;  // in [2^j, 2^{j+1})
  int j = 0;
  while ((std::size_t{2} << j) <= idx) ++j;
  return {j, idx - (std::size_t{1} << j)};
}

std::size_t fourier_frequency(std::size_t k) { return k / 2; }

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double basis_eval(const BasisSpec& basis, std::size_t k, double t) {
  if (k < 1 || k > basis.max_terms) throw InvalidArgument("basis_eval: index out of range");
  if (!(t >= 0.0 && t < 1.0)) t -= std::floor(t);
  if (basis.kind == BasisKind::haar_periodic) {
    if (k == 1) return 1.0;
    auto [j, n] = haar_level(k);
    double z = std::ldexp(t, j) - static_cast<double>(n);  // 2^j t - n
    if (z < 0.0 || z >= 1.0) return 0.0;
    double amp = std::exp2(0.5 * j);
    return z < 0.5 ? amp : -amp;
  }
  if (k == 1) return 1.0;
  double m = static_cast<double>(fourier_frequency(k));
  double arg = 2.0 * std::numbers::pi * m * t;
  return std::numbers::sqrt2 * (k % 2 == 0 ? std::cos(arg) : std::sin(arg));
}

WeightSequence WeightSequence::make(WeightRule rule, std::size_t n, double exponent) {
  if (n == 0) throw InvalidArgument("WeightSequence: empty");
  WeightSequence w;
  w.rule = rule;
  w.exponent = exponent;
  w.values.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (rule == WeightRule::wavelet_sobolev) {
      if (k == 1) {
        w.values[0] = 1.0;  // scaling function: frequency 0
      } else {
        auto [j, shift] = haar_level(k);
        (void)shift;
        double f = std::exp2(j + 1);
        w.values[k - 1] = 1.0 / std::sqrt(1.0 + f * f);
      }
    } else {
      double m = static_cast<double>(fourier_frequency(k));
      w.values[k - 1] = std::pow(1.0 + m * m, -exponent / 2.0);
    }
  }
  return w;
}

double WeightSequence::energy() const {
  double s = 0.0;
  for (double g : values) s += g * g;
  return s;
}

double WeightSequence::tail_energy() const {
  const std::size_t n = values.size();
  if (rule == WeightRule::wavelet_sobolev) {
    // Sum whole levels past N; geometric decay, so a few dozen levels suffice.
    double tail = 0.0;
    // Remaining entries of the level containing N, then full levels.
    for (std::size_t k = n + 1;; ++k) {
      auto [j, shift] = haar_level(k);
      if (shift == 0 && k > n + 1) {
        // At a level boundary: finish with the closed-form level sums.
        for (int l = j; l < j + 60; ++l) {
          double f = std::exp2(l + 1);
          tail += std::exp2(l) / (1.0 + f * f);
        }
        return tail;
      }
      double f = std::exp2(j + 1);
      tail += 1.0 / (1.0 + f * f);
    }
  }
  double tail = 0.0;
  for (std::size_t k = n + 1; k < n + 100000000; ++k) {
    double m = static_cast<double>(fourier_frequency(k));
    double term = std::pow(1.0 + m * m, -exponent);
    tail += term;
    if (term < 1e-18 * (tail + 1e-300)) break;
  }
  return tail;
}

CoeffLaw CoeffLaw::make_gpq(double p, double q) {
  CoeffLaw law;
  law.kind = Kind::gpq;
  law.gpq = GpqParams::create(p, q);
  return law;
}

CoeffLaw CoeffLaw::make_cpois_laplace(double rate) {
  if (rate < 0.0) throw InvalidArgument("CoeffLaw: negative compound Poisson rate");
  CoeffLaw law;
  law.kind = Kind::cpois_laplace;
  law.rate = rate;
  return law;
}

double CoeffLaw::variance() const {
  if (kind == Kind::gpq) return 1.0;
  return 2.0 * rate;  // rate * E[Lap(0,1)^2]
}

bool CoeffLaw::has_density() const { return kind == Kind::gpq; }

double CoeffLaw::log_pdf(double x) const {
  if (kind != Kind::gpq)
    throw InvalidArgument("CoeffLaw: compound Poisson law has no Lebesgue density");
  return gpq_log_pdf(gpq, x);
}

double CoeffLaw::sample_one(Rng& rng) const {
  if (kind == Kind::gpq) return gpq_sample_one(gpq, rng);
  static const JumpLaw lap = JumpLaw::laplace(1.0);
  return compound_poisson_scalar_one(rate, lap, rng);
}

std::complex<double> CoeffLaw::char_fn(double s) const {
  if (kind == Kind::gpq) {
    if (gpq.p == 2.0 && gpq.q == 1.0)
      return std::complex<double>(std::exp(-0.5 * s * s), 0.0);
    throw InvalidArgument("CoeffLaw: characteristic function only for Gaussian G_{2,1}");
  }
  // exp(c (E cos(s xi) - 1)) with the expectation under Lap(0,1) by quadrature.
  auto integrand = [s](double x) { return std::cos(s * x) * std::exp(-x); };
  double e_cos = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, 50.0, 12, 1e-13);
  return std::complex<double>(std::exp(rate * (e_cos - 1.0)), 0.0);
}

ProductPriorSpec ProductPriorSpec::make(BasisKind kind, std::size_t n_terms, CoeffLaw law,
                                        WeightRule rule, double exponent) {
  ProductPriorSpec spec;
  spec.basis = BasisSpec{kind, n_terms};
  spec.weights = WeightSequence::make(rule, n_terms, exponent);
  if (!std::isfinite(law.variance()))
    throw InvalidArgument("ProductPriorSpec: coefficient law must have finite variance");
  spec.law = std::move(law);
  return spec;
}

std::vector<double> sample_coefficients(const ProductPriorSpec& spec, Rng& rng) {
  std::vector<double> c(spec.n_terms());
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = spec.weights.values[k] * spec.law.sample_one(rng);
  return c;
}

GridField synthesize(const ProductPriorSpec& spec, const std::vector<double>& coefficients,
                     std::size_t n_grid) {
  const std::size_t n = coefficients.size();
  if (n > spec.n_terms()) throw InvalidArgument("synthesize: too many coefficients");
  if (n_grid < 2 * n) throw InvalidArgument("synthesize: grid too coarse (need n_grid >= 2N)");
  if (spec.basis.kind == BasisKind::haar_periodic && !is_power_of_two(n_grid))
    throw InvalidArgument("synthesize: Haar basis needs a power-of-two grid");
  GridField u;
  u.v.assign(n_grid, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    double c = coefficients[k - 1];
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < n_grid; ++i)
      u.v[i] += c * basis_eval(spec.basis, k, u.point(i));
  }
  return u;
}

MomentEstimate second_moment_estimate(const ProductPriorSpec& spec, std::size_t n_samples,
                                      Rng& rng) {
  if (n_samples < 100) throw InvalidArgument("second_moment_estimate: n_samples >= 100");
  std::vector<double> norms(n_samples);
  for (auto& v : norms) {
    auto c = sample_coefficients(spec, rng);
    double s = 0.0;
    for (double ck : c) s += ck * ck;  // Parseval: coefficient l2 = L2 norm
    v = s;
  }
  return MomentEstimate{mean(norms), standard_error(norms)};
}

std::complex<double> product_char_fn(
    const ProductPriorSpec& spec,
    const std::vector<std::pair<std::size_t, double>>& functional) {
  std::complex<double> out(1.0, 0.0);
  for (const auto& [k, rho] : functional) {
    if (k < 1 || k > spec.n_terms())
      throw InvalidArgument("product_char_fn: functional index out of range");
    out *= spec.law.char_fn(spec.weights.values[k - 1] * rho);
  }
  return out;
}

std::complex<double> empirical_product_char_fn(
    const ProductPriorSpec& spec,
    const std::vector<std::pair<std::size_t, double>>& functional, std::size_t n_samples,
    Rng& rng) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto c = sample_coefficients(spec, rng);
    double arg = 0.0;
    for (const auto& [k, rho] : functional) arg += rho * c[k - 1];
    acc += std::exp(std::complex<double>(0.0, arg));
  }
  return acc / static_cast<double>(n_samples);
}

std::vector<CompressibilityRow> compressibility_report(
    const std::vector<std::vector<double>>& coefficient_samples,
    const std::vector<double>& thresholds) {
  if (coefficient_samples.empty())
    throw InvalidArgument("compressibility_report: no samples");
  std::vector<CompressibilityRow> rows;
  rows.reserve(thresholds.size());
  for (double eps : thresholds) {
    std::size_t below = 0, total = 0;
    for (const auto& draw : coefficient_samples) {
      for (double c : draw) below += std::abs(c) < eps ? 1 : 0;
      total += draw.size();
    }
    rows.push_back({eps, static_cast<double>(below) / static_cast<double>(total)});
  }
  return rows;
}

}  // namespace idprior
