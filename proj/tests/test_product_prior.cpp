#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "idprior/errors.hpp"
#include "idprior/product_prior.hpp"
#include "idprior/rng.hpp"
#include "idprior/stats.hpp"

using namespace idprior;

namespace {

// Grid quadrature inner product (1/n) sum x_k(t_i) x_l(t_i); exact for Haar
// on power-of-two grids and near-exact for band-limited Fourier terms.
double grid_inner(const BasisSpec& basis, std::size_t k, std::size_t l, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n);
    s += basis_eval(basis, k, t) * basis_eval(basis, l, t);
  }
  return s / static_cast<double>(n);
}

}  // namespace

TEST_CASE("haar enumeration hits known values") {
  BasisSpec basis{BasisKind::haar_periodic, 16};
  CHECK(basis_eval(basis, 1, 0.3) == doctest::Approx(1.0));
  // k = 2: mother wavelet, +1 on [0, 1/2), -1 on [1/2, 1).
  CHECK(basis_eval(basis, 2, 0.2) == doctest::Approx(1.0));
  CHECK(basis_eval(basis, 2, 0.7) == doctest::Approx(-1.0));
  // k = 4 is (j, n) = (1, 1): support [1/2, 1), value +sqrt(2) on [1/2, 3/4).
  CHECK(basis_eval(basis, 4, 0.6) == doctest::Approx(std::sqrt(2.0)));
  CHECK(basis_eval(basis, 4, 0.8) == doctest::Approx(-std::sqrt(2.0)));
  CHECK(basis_eval(basis, 4, 0.2) == doctest::Approx(0.0));
  // k = 5 is (j, n) = (2, 0): support [0, 1/4).
  CHECK(basis_eval(basis, 5, 0.1) == doctest::Approx(2.0));
  CHECK(basis_eval(basis, 5, 0.6) == doctest::Approx(0.0));
}

TEST_CASE("fourier enumeration hits known values") {
  BasisSpec basis{BasisKind::fourier_real, 8};
  CHECK(basis_eval(basis, 1, 0.77) == doctest::Approx(1.0));
  CHECK(basis_eval(basis, 2, 0.25) ==
        doctest::Approx(std::sqrt(2.0) * std::cos(2.0 * M_PI * 0.25)));
  CHECK(basis_eval(basis, 3, 0.25) ==
        doctest::Approx(std::sqrt(2.0) * std::sin(2.0 * M_PI * 0.25)));
  CHECK(basis_eval(basis, 4, 0.1) ==
        doctest::Approx(std::sqrt(2.0) * std::cos(4.0 * M_PI * 0.1)));
}

TEST_CASE("bases are orthonormal under grid quadrature") {
  for (auto kind : {BasisKind::haar_periodic, BasisKind::fourier_real}) {
    BasisSpec basis{kind, 16};
    std::size_t n = 512;
    for (std::size_t k = 1; k <= 16; ++k)
      for (std::size_t l = k; l <= 16; ++l) {
        double want = k == l ? 1.0 : 0.0;
        CHECK(grid_inner(basis, k, l, n) == doctest::Approx(want).epsilon(1e-10));
      }
  }
}

TEST_CASE("wavelet sobolev weights follow the level rule") {
  auto w = WeightSequence::make(WeightRule::wavelet_sobolev, 16);
  CHECK(w.values[0] == doctest::Approx(1.0));
  for (std::size_t k = 2; k <= 16; ++k) {
    auto j = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(k - 1))));
    double want = 1.0 / std::sqrt(1.0 + std::pow(4.0, static_cast<double>(j) + 1.0));
    CHECK(w.values[k - 1] == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("fourier power weights and tail energy") {
  auto w = WeightSequence::make(WeightRule::fourier_power, 9, 3.0);
  CHECK(w.values[0] == doctest::Approx(1.0));
  // k = 2, 3 have frequency 1; k = 4, 5 frequency 2.
  CHECK(w.values[1] == doctest::Approx(std::pow(2.0, -1.5)));
  CHECK(w.values[4] == doctest::Approx(std::pow(5.0, -1.5)));

  // Brute-force remainder of the series as the oracle.
  auto extended = WeightSequence::make(WeightRule::fourier_power, 40000, 3.0);
  double brute = 0.0;
  for (std::size_t k = 9; k < 40000; ++k)
    brute += extended.values[k] * extended.values[k];
  CHECK(w.tail_energy() == doctest::Approx(brute).epsilon(1e-6));
  double head = 0.0;
  for (double g : w.values) head += g * g;
  CHECK(w.energy() == doctest::Approx(head).epsilon(1e-14));
}

TEST_CASE("synthesize satisfies parseval on dyadic grids") {
  auto prior = ProductPriorSpec::make(BasisKind::haar_periodic, 16,
                                      CoeffLaw::make_gpq(0.5, 0.5),
                                      WeightRule::wavelet_sobolev);
  Rng rng(21, 0);
  auto c = sample_coefficients(prior, rng);
  auto field = synthesize(prior, c, 64);
  double c2 = 0.0;
  for (double ck : c) c2 += ck * ck;
  CHECK(field.l2_norm() * field.l2_norm() == doctest::Approx(c2).epsilon(1e-12));
  CHECK_THROWS_AS(synthesize(prior, c, 24), InvalidArgument);   // not a power of two
  CHECK_THROWS_AS(synthesize(prior, c, 16), InvalidArgument);   // below 2N
}

TEST_CASE("second moment estimate matches the weight energy") {
  for (auto law : {CoeffLaw::make_gpq(0.5, 0.5), CoeffLaw::make_cpois_laplace(1.0)}) {
    auto prior = ProductPriorSpec::make(BasisKind::haar_periodic, 16, law,
                                        WeightRule::wavelet_sobolev);
    Rng rng(33, 1);
    auto est = second_moment_estimate(prior, 20000, rng);
    double want = prior.weights.energy() * prior.law.variance();
    CHECK(std::abs(est.value - want) < 4.0 * est.se);
  }
}

TEST_CASE("product char fn matches the empirical one") {
  std::vector<std::pair<std::size_t, double>> functional{{1, 0.7}, {3, -1.2}, {5, 0.4}};
  for (auto law : {CoeffLaw::make_gpq(2.0, 1.0), CoeffLaw::make_cpois_laplace(1.5)}) {
    auto prior = ProductPriorSpec::make(BasisKind::fourier_real, 8, law,
                                        WeightRule::fourier_power);
    Rng rng(101, 5);
    auto analytic = product_char_fn(prior, functional);
    auto empirical = empirical_product_char_fn(prior, functional, 100000, rng);
    CHECK(std::abs(analytic - empirical) < 4.0 / std::sqrt(100000.0));
  }
}

TEST_CASE("compound poisson coefficients have atoms at zero") {
  auto prior = ProductPriorSpec::make(BasisKind::haar_periodic, 32,
                                      CoeffLaw::make_cpois_laplace(0.5),
                                      WeightRule::wavelet_sobolev);
  Rng rng(9, 9);
  auto draws_rows = std::vector<std::vector<double>>{};
  std::size_t zeros = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    auto c = sample_coefficients(prior, rng);
    for (double ck : c) {
      zeros += ck == 0.0 ? 1 : 0;
      ++total;
    }
    draws_rows.push_back(std::move(c));
  }
  // P(xi = 0) = exp(-0.5) ~ 0.607.
  double frac = static_cast<double>(zeros) / static_cast<double>(total);
  CHECK(frac == doctest::Approx(std::exp(-0.5)).epsilon(0.05));

  auto rows = compressibility_report(draws_rows, {1e-8, 1e-2, 1.0});
  CHECK(rows[0].fraction_below >= frac);
  CHECK(rows[0].fraction_below <= rows[1].fraction_below);
  CHECK(rows[1].fraction_below <= rows[2].fraction_below);
}

TEST_CASE("gpq law has no atoms and no log pdf for cpois") {
  auto gpq = CoeffLaw::make_gpq(0.5, 0.5);
  CHECK(gpq.has_density());
  CHECK(gpq.variance() == doctest::Approx(1.0));
  auto cp = CoeffLaw::make_cpois_laplace(2.0);
  CHECK_FALSE(cp.has_density());
  CHECK(cp.variance() == doctest::Approx(4.0));
  CHECK_THROWS_AS(cp.log_pdf(0.3), InvalidArgument);
}
