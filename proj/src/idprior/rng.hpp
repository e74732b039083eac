#pragma once

#include <cstdint>
#include <random>

namespace idprior {

// Seeded random stream. Identical (seed, stream) pairs reproduce identical
// draw sequences; distinct streams are decorrelated via splitmix64 mixing.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix(seed) ^ mix(stream * 0x9e3779b97f4a7c15ULL + 1)) {}

  std::mt19937_64& engine() { return engine_; }

  // Uniform on (0,1).
  double uniform() {
    std::uniform_real_distribution<double> d(0.0, 1.0);
    double u;
    do {
      u = d(engine_);
    } while (u <= 0.0);
    return u;
  }

  double normal(double mean = 0.0, double stddev = 1.0) {
    std::normal_distribution<double> d(mean, stddev);
    return d(engine_);
  }

  // Gamma(shape, scale=1).
  double gamma(double shape) {
    std::gamma_distribution<double> d(shape, 1.0);
    return d(engine_);
  }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(engine_);
  }

  double exponential(double rate) {
    std::exponential_distribution<double> d(rate);
    return d(engine_);
  }

  // Laplace(0, scale) via inverse CDF.
  double laplace(double scale = 1.0) {
    double u = uniform() - 0.5;
    return u < 0 ? scale * std::log(1.0 + 2.0 * u) : -scale * std::log(1.0 - 2.0 * u);
  }

  double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

  // Child stream for a labelled subtask; deterministic given (this seed, label).
  Rng fork(std::uint64_t label) {
    return Rng(engine_(), label);
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace idprior
