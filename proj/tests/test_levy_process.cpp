#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "idprior/levy_process.hpp"
#include "idprior/rng.hpp"
#include "idprior/stats.hpp"

using namespace idprior;

namespace {

// Partition-sum oracle: sum |u(s_{i+1}) - u(s_i)| over a partition. The TV is
// the supremum over partitions; for a piecewise-constant path any partition
// separating the jump times attains it.
double partition_sum(const JumpPath& path, const std::vector<double>& partition) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < partition.size(); ++i)
    s += std::abs(path.value_at(partition[i + 1]) - path.value_at(partition[i]));
  return s;
}

// Partition that isolates every jump: 0, midpoints between consecutive jump
// times, 1.
std::vector<double> separating_partition(const JumpPath& path) {
  std::vector<double> pts{0.0};
  for (std::size_t i = 0; i + 1 < path.times.size(); ++i)
    pts.push_back(0.5 * (path.times[i] + path.times[i + 1]));
  pts.push_back(1.0);
  return pts;
}

// Jump law with dyadic values in {+-1, +-0.5}: every cumulative sum and
// difference is exactly representable, so TV comparisons are exact.
JumpLaw dyadic_law() {
  JumpLaw law;
  law.sample = [](Rng& rng) {
    double mag = rng.uniform() < 0.5 ? 1.0 : 0.5;
    return rng.sign() * mag;
  };
  law.second_moment = 0.625;
  law.name = "dyadic";
  return law;
}

}  // namespace

TEST_CASE("path value accumulates jumps") {
  JumpPath path{{0.25, 0.5, 0.75}, {1.0, -2.0, 0.5}};
  CHECK(path.value_at(0.0) == 0.0);
  CHECK(path.value_at(0.25) == 1.0);  // cadlag: jump included at its time
  CHECK(path.value_at(0.3) == 1.0);
  CHECK(path.value_at(0.6) == -1.0);
  CHECK(path.value_at(1.0) == -0.5);
  CHECK(path_tv(path) == 3.5);
  CHECK(path_sup_norm(path) == 1.0);
}

TEST_CASE("path tv equals the partition supremum exactly") {
  Rng rng(42, 7);
  auto law = dyadic_law();
  for (int rep = 0; rep < 200; ++rep) {
    auto path = sample_cpp_path(4.0, law, rng);
    double tv = path_tv(path);
    // Coarse partitions never exceed the TV.
    std::vector<double> coarse{0.0, 0.33, 0.66, 1.0};
    CHECK(partition_sum(path, coarse) <= tv);
    // The separating partition attains it exactly.
    if (!path.times.empty())
      CHECK(partition_sum(path, separating_partition(path)) == tv);
  }
}

TEST_CASE("expected tv equals rate times mean absolute jump") {
  const double rate = 3.0;
  Rng rng(5, 1);
  auto law = JumpLaw::normal();
  const std::size_t n = 20000;
  std::vector<double> tvs(n);
  for (auto& tv : tvs) tv = path_tv(sample_cpp_path(rate, law, rng));
  double want = rate * std::sqrt(2.0 / M_PI);  // E|N(0,1)|
  CHECK(std::abs(mean(tvs) - want) < 4.0 * standard_error(tvs));
}

TEST_CASE("rasterize matches value_at on grid points") {
  JumpPath path{{0.2, 0.7}, {1.5, -0.5}};
  auto field = rasterize(path, 16);
  for (std::size_t i = 0; i < 16; ++i)
    CHECK(field.v[i] == path.value_at(field.point(i)));
}

TEST_CASE("gp draws have the right marginal scale and smoothness") {
  GpSpec spec{10.0, 128, 1e-10};
  Rng rng(77, 0);
  std::vector<double> at_mid;
  for (int rep = 0; rep < 800; ++rep) {
    auto f = sample_gp(spec, rng);
    at_mid.push_back(f.v[64]);
  }
  // kappa(t, t) = 1: unit marginal variance.
  CHECK(variance(at_mid) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("gp covariance matches the squared exponential kernel") {
  GpSpec spec{25.0, 64, 1e-10};
  Rng rng(78, 0);
  const int reps = 4000;
  double c_near = 0.0, c_far = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    auto f = sample_gp(spec, rng);
    c_near += f.v[10] * f.v[12];
    c_far += f.v[10] * f.v[42];
  }
  c_near /= reps;
  c_far /= reps;
  double r_near = 2.0 / 64.0, r_far = 32.0 / 64.0;
  CHECK(c_near == doctest::Approx(std::exp(-25.0 * r_near * r_near)).epsilon(0.1));
  CHECK(std::abs(c_far - std::exp(-25.0 * r_far * r_far)) < 0.05);
}

TEST_CASE("hybrid path adds gp and jumps") {
  GpSpec spec{4.0, 64, 1e-10};
  Rng rng(9, 2);
  auto f = sample_hybrid_path(spec, 2.0, JumpLaw::normal(), rng);
  CHECK(f.size() == 64);
  // Discrete variation finite and nonzero with overwhelming probability.
  CHECK(discrete_variation(f) > 0.0);
}

TEST_CASE("2d bv field has arrivals plus one distinct values") {
  GpSpec spec{8.0, 32, 1e-10};
  Rng rng(3, 3);
  for (int rep = 0; rep < 50; ++rep) {
    std::size_t arrivals = 0;
    auto field = sample_bv_field_2d(spec, 5.0, JumpLaw::normal(), rng, &arrivals);
    std::set<double> distinct(field.v.begin(), field.v.end());
    CHECK(distinct.size() == arrivals + 1);
  }
}

TEST_CASE("discrete variation on a known step field") {
  GridField f{{0.0, 0.0, 2.0, 2.0}};
  // Non-periodic forward differences: |0| + |2| + |0| = 2.
  CHECK(discrete_variation(f) == doctest::Approx(2.0));

  GridField2D g;
  g.n = 4;
  g.v.assign(16, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 2; j < 4; ++j) g.at(i, j) = 1.0;
  // A vertical edge of height 1 crossing the whole square: 4 cells step by 1
  // in y, spacing 1/4, total h * 4 * 1 = 1.
  CHECK(discrete_variation(g) == doctest::Approx(1.0));
}

TEST_CASE("level set perimeter recovers a circle") {
  const std::size_t n = 256;
  GridField2D f;
  f.n = n;
  f.v.resize(n * n);
  const double r0 = 0.3;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double x = (static_cast<double>(i) + 0.5) / n - 0.5;
      double y = (static_cast<double>(j) + 0.5) / n - 0.5;
      f.at(i, j) = r0 - std::sqrt(x * x + y * y);
    }
  double perimeter = level_set_perimeter_estimate(f, 0.0);
  CHECK(perimeter == doctest::Approx(2.0 * M_PI * r0).epsilon(0.02));
}

TEST_CASE("path sampling is reproducible and ordered") {
  Rng a(10, 4), b(10, 4);
  auto law = JumpLaw::laplace();
  auto p1 = sample_cpp_path(6.0, law, a);
  auto p2 = sample_cpp_path(6.0, law, b);
  CHECK(p1.times == p2.times);
  CHECK(p1.sizes == p2.sizes);
  CHECK(std::is_sorted(p1.times.begin(), p1.times.end()));
  for (double t : p1.times) {
    CHECK(t > 0.0);
    CHECK(t <= 1.0);
  }
}
