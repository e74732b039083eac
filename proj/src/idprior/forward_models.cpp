#include "idprior/forward_models.hpp"

#include <cmath>

#include "idprior/errors.hpp"

namespace idprior {

GridField circular_convolve(const GridField& u, const GridField& kernel) {
  const std::size_t n = u.size();
  if (kernel.size() != n) throw InvalidArgument("circular_convolve: grid size mismatch");
  GridField out;
  out.v.assign(n, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      // index of (t_i - t_j) mod 1 on the shared grid
      std::size_t k = i >= j ? i - j : n + i - j;
      acc += kernel.v[k] * u.v[j];
    }
    out.v[i] = acc * inv_n;
  }
  return out;
}

double sample_point(const GridField& u, double t) {
  const std::size_t n = u.size();
  t -= std::floor(t);
  double pos = t * static_cast<double>(n);
  auto i = static_cast<std::size_t>(pos);
  if (i >= n) i = n - 1;
  double frac = pos - static_cast<double>(i);
  return u.v[i] * (1.0 - frac) + u.v[(i + 1) % n] * frac;
}

std::vector<double> sample_points(const GridField& u, const std::vector<double>& points) {
  std::vector<double> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out[j] = sample_point(u, points[j]);
  return out;
}

GridField gaussian_bump_kernel(std::size_t n_grid, double width) {
  if (width <= 0.0) throw InvalidArgument("gaussian_bump_kernel: width must be positive");
  GridField phi;
  phi.v.resize(n_grid);
  double total = 0.0;
  for (std::size_t i = 0; i < n_grid; ++i) {
    double t = static_cast<double>(i) / static_cast<double>(n_grid);
    double val = 0.0;
    for (int l = -3; l <= 3; ++l) {
      double d = t + static_cast<double>(l);
      val += std::exp(-d * d / (2.0 * width * width));
    }
    phi.v[i] = val;
    total += val;
  }
  // Unit integral under the quadrature rule (1/n) sum phi_i = 1.
  double scale = static_cast<double>(n_grid) / total;
  for (auto& v : phi.v) v *= scale;
  return phi;
}

std::vector<double> DeconvModel::apply(const GridField& u) const {
  return sample_points(circular_convolve(u, kernel), obs_points);
}

std::vector<double> QuadModel::apply(const GridField& u) const {
  if (static_cast<std::size_t>(sensing.cols()) != obs_points.size())
    throw InvalidArgument("QuadModel: sensing vector length must equal point count");
  auto s = sample_points(u, obs_points);
  Eigen::Map<const Eigen::VectorXd> sv(s.data(), static_cast<Eigen::Index>(s.size()));
  Eigen::VectorXd proj = sensing * sv;
  std::vector<double> y(static_cast<std::size_t>(proj.size()));
  for (std::size_t j = 0; j < y.size(); ++j) {
    double p = proj(static_cast<Eigen::Index>(j));
    y[j] = p * p;
  }
  return y;
}

QuadModel QuadModel::random(std::size_t m, const std::vector<double>& obs_points, Rng& rng) {
  QuadModel model;
  model.obs_points = obs_points;
  const auto n = static_cast<Eigen::Index>(obs_points.size());
  model.sensing.resize(static_cast<Eigen::Index>(m), n);
  double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index i = 0; i < model.sensing.rows(); ++i)
    for (Eigen::Index j = 0; j < n; ++j) model.sensing(i, j) = scale * rng.normal();
  return model;
}

std::vector<double> forward_apply(const ForwardModel& model, const GridField& u) {
  return std::visit([&u](const auto& m) { return m.apply(u); }, model);
}

bool forward_is_linear(const ForwardModel& model) {
  return std::holds_alternative<DeconvModel>(model);
}

double forward_growth(const ForwardModel& model, double norm) {
  return forward_is_linear(model) ? norm : norm * norm;
}

namespace {

double vec_norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Random band-limited field with grid norm <= radius.
GridField random_smooth_field(std::size_t n_grid, double radius, Rng& rng) {
  GridField f;
  f.v.assign(n_grid, 0.0);
  for (int m = 0; m <= 8; ++m) {
    double a = rng.normal(), b = rng.normal();
    for (std::size_t i = 0; i < n_grid; ++i) {
      double t = static_cast<double>(i) / static_cast<double>(n_grid);
      f.v[i] += a * std::cos(2.0 * M_PI * m * t) + b * std::sin(2.0 * M_PI * m * t);
    }
  }
  double norm = f.l2_norm();
  double target = radius * rng.uniform();
  if (norm > 0.0)
    for (auto& v : f.v) v *= target / norm;
  return f;
}

}  // namespace

LipschitzReport lipschitz_diagnostic(const ForwardModel& model, std::size_t n_grid,
                                     double radius, std::size_t n_pairs, Rng& rng) {
  if (radius <= 0.0) throw InvalidArgument("lipschitz_diagnostic: radius must be positive");
  LipschitzReport report;
  report.radius = radius;
  report.n_pairs = n_pairs;
  for (std::size_t k = 0; k < n_pairs; ++k) {
    GridField u1 = random_smooth_field(n_grid, radius, rng);
    GridField u2 = random_smooth_field(n_grid, radius, rng);
    auto y1 = forward_apply(model, u1);
    auto y2 = forward_apply(model, u2);
    std::vector<double> diff(y1.size());
    for (std::size_t j = 0; j < y1.size(); ++j) diff[j] = y1[j] - y2[j];
    std::vector<double> udiff(u1.size());
    for (std::size_t j = 0; j < u1.size(); ++j) udiff[j] = u1.v[j] - u2.v[j];
    GridField ud{std::move(udiff)};
    double du = ud.l2_norm();
    if (du > 1e-12)
      report.max_lipschitz_ratio = std::max(report.max_lipschitz_ratio, vec_norm(diff) / du);
    double nu = u1.l2_norm();
    if (nu > 1e-12)
      report.max_growth_ratio =
          std::max(report.max_growth_ratio, vec_norm(y1) / forward_growth(model, nu));
  }
  return report;
}

}  // namespace idprior
