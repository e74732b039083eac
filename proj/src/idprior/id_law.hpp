#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "idprior/rng.hpp"

namespace idprior {

// A sampleable 1D jump distribution. char_fn is the analytic characteristic
// function when known; otherwise the Levy-Khintchine evaluation falls back
// to a large-sample Monte Carlo expectation.
struct JumpLaw {
  std::function<double(Rng&)> sample;
  std::function<std::complex<double>(double)> char_fn;  // may be empty
  double second_moment = 0.0;                           // E u^2, required finite
  std::string name = "custom";

  static JumpLaw normal(double mean = 0.0, double stddev = 1.0);
  static JumpLaw point_mass(double a);
  static JumpLaw laplace(double scale = 1.0);
  static JumpLaw cauchy();  // diagnostics only: no finite moments
};

// Finite-activity infinitely divisible law ID(m, sigma2, c * jump_law).
// The compensator shift is folded into m, so the decomposition
//   draw = m + N(0, sigma2) + CompoundPoisson(c, jump_law)
// is exact.
struct ScalarIdTriplet {
  double m = 0.0;
  double sigma2 = 0.0;
  double levy_rate = 0.0;
  JumpLaw levy_jump_law;

  void validate() const;
};

// Draws sum_{k=1}^{tau} u_k with tau ~ Poisson(rate); tau = 0 gives exactly 0.
std::vector<double> compound_poisson_scalar_sample(double rate, const JumpLaw& jump_law,
                                                   std::size_t n, Rng& rng);
double compound_poisson_scalar_one(double rate, const JumpLaw& jump_law, Rng& rng);

std::vector<double> id_sample(const ScalarIdTriplet& triplet, std::size_t n, Rng& rng);

// Characteristic function in the finite-activity Levy-Khintchine form
//   exp( i m s - sigma2 s^2 / 2 + c (E exp(i s u) - 1) ).
std::complex<double> id_char_fn(const ScalarIdTriplet& triplet, double s);

// Empirical characteristic function of a sample at s.
std::complex<double> empirical_char_fn(const std::vector<double>& sample, double s);

enum class TailVerdict { finite, divergent };

struct TailCheckReport {
  double mean_h = 0.0;          // over the full sample
  double trimmed_mean_1 = 0.0;  // top-1% trimmed
  double trimmed_mean_5 = 0.0;  // top-5% trimmed
  double ratio = 0.0;           // trimmed_mean_1 / trimmed_mean_5
  TailVerdict verdict = TailVerdict::finite;
};

// Diagnostic check of E h(|xi|) < infinity via trimmed-mean stability.
// Heuristic: ratio of top-1% to top-5% trimmed means above 2 flags
// divergence (the trimmed mean keeps growing as trimming is relaxed).
TailCheckReport submultiplicative_tail_check(const std::vector<double>& sample,
                                             const std::function<double(double)>& h);

}  // namespace idprior
