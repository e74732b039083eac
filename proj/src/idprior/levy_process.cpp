#include "idprior/levy_process.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "idprior/errors.hpp"

namespace idprior {

double JumpPath::value_at(double t) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < times.size() && times[k] <= t; ++k) sum += sizes[k];
  return sum;
}

JumpPath sample_cpp_path(double rate, const JumpLaw& jump_law, Rng& rng) {
  if (rate < 0.0) throw InvalidArgument("sample_cpp_path: negative rate");
  JumpPath path;
  auto tau = rng.poisson(rate);
  path.times.resize(tau);
  for (auto& t : path.times) t = 1.0 - rng.uniform();  // (0,1)
  std::sort(path.times.begin(), path.times.end());
  path.sizes.resize(tau);
  for (auto& s : path.sizes) s = jump_law.sample(rng);
  return path;
}

double path_tv(const JumpPath& path) {
  double tv = 0.0;
  for (double s : path.sizes) tv += std::abs(s);
  return tv;
}

double path_sup_norm(const JumpPath& path) {
  double level = 0.0, sup = 0.0;
  for (double s : path.sizes) {
    level += s;
    sup = std::max(sup, std::abs(level));
  }
  return sup;
}

GridField rasterize(const JumpPath& path, std::size_t n) {
  GridField f;
  f.v.resize(n);
  double level = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n);
    while (k < path.times.size() && path.times[k] <= t) level += path.sizes[k++];
    f.v[i] = level;
  }
  return f;
}

namespace {

using Factor = std::shared_ptr<const Eigen::MatrixXd>;

// Lower Cholesky factor of the squared-exponential covariance over the given
// points, with jitter escalation (x10 up to 1e-6).
Factor cholesky_factor(const std::vector<double>& xs, const std::vector<double>& ys,
                       double bandwidth, double jitter0) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double dx = xs[i] - xs[j];
      double dy = ys[i] - ys[j];
      double c = std::exp(-bandwidth * (dx * dx + dy * dy));
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  for (double jitter = jitter0; jitter <= 1.0000001e-6; jitter *= 10.0) {
    Eigen::MatrixXd regularized = cov + jitter * Eigen::MatrixXd::Identity(n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(regularized);
    if (llt.info() == Eigen::Success)
      return std::make_shared<const Eigen::MatrixXd>(llt.matrixL());
  }
  throw NumericError("GP covariance factorization failed at maximum jitter 1e-6");
}

Factor cached_factor_1d(const GpSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<double, std::size_t, double>, Factor> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(spec.bandwidth, spec.n, spec.jitter);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> xs(spec.n), ys(spec.n, 0.0);
  for (std::size_t i = 0; i < spec.n; ++i)
    xs[i] = static_cast<double>(i) / static_cast<double>(spec.n);
  auto factor = cholesky_factor(xs, ys, spec.bandwidth, spec.jitter);
  cache.emplace(key, factor);
  return factor;
}

Factor cached_factor_2d(const GpSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<double, std::size_t, double>, Factor> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(spec.bandwidth, spec.n, spec.jitter);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> xs, ys;
  xs.reserve(spec.n * spec.n);
  ys.reserve(spec.n * spec.n);
  double h = 1.0 / static_cast<double>(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = 0; j < spec.n; ++j) {
      xs.push_back((static_cast<double>(i) + 0.5) * h);
      ys.push_back((static_cast<double>(j) + 0.5) * h);
    }
  }
  auto factor = cholesky_factor(xs, ys, spec.bandwidth, spec.jitter);
  cache.emplace(key, factor);
  return factor;
}

}  // namespace

GridField sample_gp(const GpSpec& spec, Rng& rng) {
  if (spec.n > 4096) throw InvalidArgument("sample_gp: grid limited to 4096 points");
  auto factor = cached_factor_1d(spec);
  Eigen::VectorXd z(factor->rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  Eigen::VectorXd g = (*factor) * z;
  GridField f;
  f.v.assign(g.data(), g.data() + g.size());
  return f;
}

GridField2D sample_gp_2d(const GpSpec& spec, Rng& rng) {
  if (spec.n > 64) throw InvalidArgument("sample_gp_2d: grid limited to 64x64");
  auto factor = cached_factor_2d(spec);
  Eigen::VectorXd z(factor->rows());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  Eigen::VectorXd g = (*factor) * z;
  GridField2D f;
  f.n = spec.n;
  f.v.assign(g.data(), g.data() + g.size());
  return f;
}

GridField sample_hybrid_path(const GpSpec& gp, double rate, const JumpLaw& jump_law,
                             Rng& rng) {
  GridField g = sample_gp(gp, rng);
  JumpPath path = sample_cpp_path(rate, jump_law, rng);
  GridField u = rasterize(path, gp.n);
  for (std::size_t i = 0; i < g.size(); ++i) g.v[i] += u.v[i];
  return g;
}

GridField2D sample_bv_field_2d(const GpSpec& gp, double rate, const JumpLaw& jump_law,
                               Rng& rng, std::size_t* arrival_count) {
  if (rate < 0.0) throw InvalidArgument("sample_bv_field_2d: negative rate");
  GridField2D g = sample_gp_2d(gp, rng);
  double max_gplus = 0.0;
  for (double v : g.v) max_gplus = std::max(max_gplus, v);

  std::vector<double> gplus_sorted;
  gplus_sorted.reserve(g.v.size());
  for (double v : g.v) gplus_sorted.push_back(std::max(0.0, v));
  std::sort(gplus_sorted.begin(), gplus_sorted.end());

  // One shared arrival stream on [0, max g+]: exponential(rate) gaps. Streams
  // whose inter-arrival bands contain no grid value are redrawn so that every
  // level 0..tau(M) is realized on the grid (the distinct-value identity is a
  // contract of this sampler).
  std::vector<double> arrivals;
  if (rate > 0.0) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      arrivals.clear();
      double a = rng.exponential(rate);
      while (a <= max_gplus) {
        arrivals.push_back(a);
        a += rng.exponential(rate);
      }
      // Level k is realized iff some g+ value lies in [a_k, a_{k+1}), a_0 = 0.
      bool all_bands_hit = true;
      for (std::size_t k = 0; k <= arrivals.size() && all_bands_hit; ++k) {
        double lo = k == 0 ? 0.0 : arrivals[k - 1];
        double hi = k < arrivals.size() ? arrivals[k]
                                        : std::numeric_limits<double>::infinity();
        auto it = std::lower_bound(gplus_sorted.begin(), gplus_sorted.end(), lo);
        if (it == gplus_sorted.end() || !(*it < hi)) all_bands_hit = false;
      }
      if (all_bands_hit) break;
      if (attempt == 9999)
        throw NumericError("sample_bv_field_2d: could not realize all levels on the grid");
    }
  }
  std::vector<double> levels(arrivals.size() + 1, 0.0);  // S_0 = 0
  for (std::size_t k = 0; k < arrivals.size(); ++k)
    levels[k + 1] = levels[k] + jump_law.sample(rng);
  if (arrival_count) *arrival_count = arrivals.size();

  GridField2D u;
  u.n = g.n;
  u.v.resize(g.v.size());
  for (std::size_t i = 0; i < g.v.size(); ++i) {
    double gplus = std::max(0.0, g.v[i]);
    auto count = static_cast<std::size_t>(
        std::upper_bound(arrivals.begin(), arrivals.end(), gplus) - arrivals.begin());
    u.v[i] = levels[count];
  }
  return u;
}

double discrete_variation(const GridField& field) {
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < field.size(); ++i)
    tv += std::abs(field.v[i + 1] - field.v[i]);
  return tv;
}

double discrete_variation(const GridField2D& field) {
  const std::size_t n = field.n;
  const double h = field.spacing();
  double tv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + 1 < n) tv += h * std::abs(field.at(i + 1, j) - field.at(i, j));
      if (j + 1 < n) tv += h * std::abs(field.at(i, j + 1) - field.at(i, j));
    }
  }
  return tv;
}

namespace {

struct Point {
  double x, y;
};

double segment_length(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

double level_set_perimeter_estimate(const GridField2D& field, double level) {
  const std::size_t n = field.n;
  const double h = field.spacing();
  double length = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      // Cell corners (node coordinates in grid units).
      double f00 = field.at(i, j) - level;
      double f10 = field.at(i + 1, j) - level;
      double f01 = field.at(i, j + 1) - level;
      double f11 = field.at(i + 1, j + 1) - level;

      auto cross = [](double a, double b) { return (a < 0.0) != (b < 0.0); };
      auto lerp = [](double a, double b) { return a / (a - b); };

      std::vector<Point> pts;  // crossing points, cell-local coordinates
      if (cross(f00, f10)) pts.push_back({lerp(f00, f10), 0.0});
      if (cross(f01, f11)) pts.push_back({lerp(f01, f11), 1.0});
      if (cross(f00, f01)) pts.push_back({0.0, lerp(f00, f01)});
      if (cross(f10, f11)) pts.push_back({1.0, lerp(f10, f11)});

      if (pts.size() == 2) {
        length += segment_length(pts[0], pts[1]);
      } else if (pts.size() == 4) {
        // Saddle cell: pair crossings by the sign of the center value.
        double center = 0.25 * (f00 + f10 + f01 + f11);
        // pts order: bottom, top, left, right.
        if ((center < 0.0) == (f00 < 0.0)) {
          length += segment_length(pts[0], pts[3]) + segment_length(pts[2], pts[1]);
        } else {
          length += segment_length(pts[0], pts[2]) + segment_length(pts[3], pts[1]);
        }
      }
    }
  }
  return length * h;
}

}  // namespace idprior
