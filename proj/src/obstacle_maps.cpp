#include "qvi/obstacle_maps.hpp"

#include <cmath>

namespace qvi {

double phi_scalar_derivative(double s, double z, ScalarPhiVariant variant) {
  // One-sided derivative: slope to the right of s when z > 0, to the
  // left when z < 0, times z.
  auto pick = [&](double left_slope, double right_slope) {
    if (z > 0.0) return right_slope * z;
    if (z < 0.0) return left_slope * z;
    return 0.0;
  };
  switch (variant) {
    case ScalarPhiVariant::A:
      if (s < 0.0) return 0.0;
      if (s == 0.0) return pick(0.0, 1.0);
      if (s < 1.0) return z;
      if (s == 1.0) return z;  // tail has matching slope 1 at s = 1
      return z / (s * s);
    case ScalarPhiVariant::B:
      if (s < 1.0) return 0.0;
      if (s == 1.0) return pick(0.0, 1.0);
      if (s < 2.0) return z;
      if (s == 2.0) return pick(1.0, 0.0);
      return 0.0;
    case ScalarPhiVariant::C:
      if (s < -2.0 || s > 2.0) return 0.0;
      if (s == -2.0) return pick(0.0, 0.5);
      if (s == 2.0) return pick(0.5, 0.0);
      return 0.5 * z;
  }
  return 0.0;
}

namespace {

void check_theta_domain(const GridFunction& y, const ImpulseConfig& cfg,
                        double tol) {
  cfg.validate(static_cast<int>(y.size()));
  for (double v : y.values)
    if (v < -cfg.kappa - tol)
      throw std::invalid_argument("theta_impulse: input below -kappa");
}

double theta_node(const std::vector<double>& y, const std::vector<double>& c0,
                  std::size_t i, double kappa) {
  double best = c0[0] + y[i];
  for (std::size_t j = 1; i + j < y.size(); ++j)
    best = std::min(best, c0[j] + y[i + j]);
  return kappa + best;
}

}  // namespace

GridFunction theta_impulse_serial(const GridFunction& y, const ImpulseConfig& cfg,
                                  double tol) {
  check_theta_domain(y, cfg, tol);
  GridFunction r = GridFunction::zeros_like(y);
  for (std::size_t i = 0; i < y.size(); ++i)
    r.values[i] = theta_node(y.values, cfg.c0, i, cfg.kappa);
  return r;
}

GridFunction theta_impulse(const GridFunction& y, const ImpulseConfig& cfg,
                           double tol) {
  check_theta_domain(y, cfg, tol);
  GridFunction r = GridFunction::zeros_like(y);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    r.values[i] = theta_node(y.values, cfg.c0, static_cast<std::size_t>(i), cfg.kappa);
  return r;
}

GridFunction theta_impulse_suffix(const GridFunction& y, const ImpulseConfig& cfg,
                                  double tol) {
  if (!cfg.zero_c0())
    throw std::invalid_argument("theta_impulse_suffix: requires c0 == 0");
  check_theta_domain(y, cfg, tol);
  GridFunction r = GridFunction::zeros_like(y);
  double suffix = kInf;
  for (std::size_t i = y.size(); i-- > 0;) {
    // 0.0 + y_i mirrors the brute-force accumulation so results match
    // bit for bit.
    suffix = std::min(suffix, 0.0 + y.values[i]);
    r.values[i] = cfg.kappa + suffix;
  }
  return r;
}

GridFunction phi_truncated_impulse(const GridFunction& v, const ImpulseConfig& cfg) {
  GridFunction clipped = v;
  for (double& x : clipped.values) x = std::max(x, -cfg.kappa);
  return theta_impulse(clipped, cfg, 0.0);
}

double HeatNonlinearity::derivative(double s, double z) const {
  const double slope = 1.0 / (1.0 + eps);
  const double lo = -eps, hi = 1.0 - eps;
  auto pick = [&](double left, double right) {
    if (z > 0.0) return right * z;
    if (z < 0.0) return left * z;
    return 0.0;
  };
  if (s < lo || s > hi) return 0.0;
  if (s == lo) return pick(0.0, slope);
  if (s == hi) return pick(slope, 0.0);
  return slope * z;
}

GridFunction phi_heat(const SpaceTimeFunction& y, const HeatNonlinearity& g,
                      const SpaceTimeGrid& grid) {
  const int n = grid.space.n_interior;
  const int m = grid.space_nodes();
  if (y.grid != grid || static_cast<int>(y.slices.size()) != grid.n_steps + 1)
    throw std::invalid_argument("phi_heat: trajectory does not match the grid");

  // Source lives on the interior (Dirichlet) grid; boundary values of y
  // do not enter.
  SpaceTimeFunction source;
  source.grid = grid;
  source.slices.reserve(grid.n_steps + 1);
  for (const auto& slice : y.slices) {
    if (static_cast<int>(slice.size()) != m)
      throw std::invalid_argument("phi_heat: slice does not match the spatial grid");
    GridFunction s;
    s.values.resize(n);
    s.weights.assign(n, grid.space.h());
    for (int i = 0; i < n; ++i) s.values[i] = g(slice.values[i + 1]);
    source.slices.push_back(std::move(s));
  }

  auto w = solve_heat(source, grid);
  GridFunction out = neumann_grid_function(grid, 0.0);
  for (int i = 0; i < n; ++i) out.values[i + 1] = w.slices.back().values[i];
  return out;
}

}  // namespace qvi
