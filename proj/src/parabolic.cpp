#include "qvi/parabolic.hpp"

#include <algorithm>
#include <cmath>

namespace qvi {

GridFunction neumann_grid_function(const SpaceTimeGrid& g, double c) {
  const int m = g.space_nodes();
  const double h = g.space.h();
  GridFunction r;
  r.values.assign(m, c);
  r.weights.assign(m, h);
  r.weights.front() = 0.5 * h;
  r.weights.back() = 0.5 * h;
  return r;
}

namespace {

// I/dt + A_N with ghost-node elimination: boundary rows (y_0 - y_1)/h^2,
// flux load u/h on the right-hand side.
detail::TridiagObstacle neumann_matrix(const SpaceTimeGrid& g,
                                       const Nonlinearity& f) {
  const int m = g.space_nodes();
  const double h = g.space.h();
  const double a = 1.0 / (h * h);
  const double shift = 1.0 / g.dt();
  detail::TridiagObstacle mat;
  mat.diag.assign(m, 2.0 * a + shift);
  mat.off_lower.assign(m, -a);
  mat.off_upper.assign(m, -a);
  mat.diag.front() = a + shift;
  mat.diag.back() = a + shift;
  mat.off_lower.front() = 0.0;
  mat.off_upper.back() = 0.0;
  mat.f = &f;
  return mat;
}

}  // namespace

SpaceTimeFunction solve_parabolic_obstacle(const SpaceTimeGrid& grid,
                                           const ExtendedObstacle& p,
                                           const GridFunction& psi,
                                           const BoundaryControl& u,
                                           const Tolerances& tol) {
  const int m = grid.space_nodes();
  if (static_cast<int>(psi.size()) != m)
    throw std::invalid_argument("solve_parabolic_obstacle: psi does not match the grid");
  if (static_cast<int>(u.left.size()) != grid.n_steps + 1 ||
      static_cast<int>(u.right.size()) != grid.n_steps + 1)
    throw std::invalid_argument("solve_parabolic_obstacle: control length mismatch");
  for (int k = 0; k <= grid.n_steps; ++k)
    if (u.left[k] < -tol.tol_order || u.right[k] < -tol.tol_order)
      throw std::invalid_argument("solve_parabolic_obstacle: control must be nonnegative");
  for (double v : psi.values)
    if (v < -tol.tol_order)
      throw std::invalid_argument("solve_parabolic_obstacle: psi must be nonnegative");
  if (!p.is_top() && static_cast<int>(p.finite_value().size()) != m)
    throw std::invalid_argument("solve_parabolic_obstacle: obstacle does not match the grid");

  static const Nonlinearity no_f = Nonlinearity::zero();
  auto mat = neumann_matrix(grid, no_f);
  const double h = grid.space.h();
  const double dt = grid.dt();

  std::vector<double> upper_storage;
  const std::vector<double>* upper = nullptr;
  if (!p.is_top()) {
    upper_storage.resize(m);
    for (int i = 0; i < m; ++i)
      upper_storage[i] = psi.values[i] + p.finite_value().values[i];
    upper = &upper_storage;
  }

  SpaceTimeFunction y;
  y.grid = grid;
  y.slices.reserve(grid.n_steps + 1);
  y.slices.push_back(neumann_grid_function(grid, 0.0));

  std::vector<double> rhs(m);
  for (int k = 1; k <= grid.n_steps; ++k) {
    const auto& prev = y.slices.back();
    for (int i = 0; i < m; ++i) rhs[i] = prev.values[i] / dt;
    rhs.front() += u.left[k] / h;
    rhs.back() += u.right[k] / h;
    GridFunction slice = prev;
    try {
      mat.solve(slice.values, rhs, upper, tol.tol_inner, tol.max_inner, 0.0, 1.0 / h);
    } catch (const SolverFailure& e) {
      throw SolverFailure("parabolic step " + std::to_string(k) + ": " + e.what(),
                          e.last_iterate, e.last_residual);
    }
    y.slices.push_back(std::move(slice));
  }
  return y;
}

SpaceTimeFunction solve_heat(const SpaceTimeFunction& source,
                             const SpaceTimeGrid& grid) {
  const int n = grid.space.n_interior;
  if (static_cast<int>(source.slices.size()) != grid.n_steps + 1)
    throw std::invalid_argument("solve_heat: source slice count mismatch");
  for (const auto& s : source.slices)
    if (static_cast<int>(s.size()) != n)
      throw std::invalid_argument("solve_heat: source slices must live on the interior grid");

  const double h = grid.space.h();
  const double a = 1.0 / (h * h);
  const double shift = 1.0 / grid.dt();
  static const Nonlinearity no_f = Nonlinearity::zero();
  detail::TridiagObstacle mat;
  mat.diag.assign(n, 2.0 * a + shift);
  mat.off_lower.assign(n, -a);
  mat.off_upper.assign(n, -a);
  mat.off_lower.front() = 0.0;
  mat.off_upper.back() = 0.0;
  mat.f = &no_f;

  SpaceTimeFunction w;
  w.grid = grid;
  w.slices.reserve(grid.n_steps + 1);
  GridFunction zero;
  zero.values.assign(n, 0.0);
  zero.weights.assign(n, h);
  w.slices.push_back(zero);

  std::vector<double> rhs(n);
  for (int k = 1; k <= grid.n_steps; ++k) {
    const auto& prev = w.slices.back();
    for (int i = 0; i < n; ++i) rhs[i] = prev.values[i] * shift + source.slices[k].values[i];
    GridFunction slice = prev;
    mat.solve(slice.values, rhs, nullptr, 1e-14, 1 << 20, 0.0, 1.0 / h);
    w.slices.push_back(std::move(slice));
  }
  return w;
}

}  // namespace qvi
