#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "qvi/parabolic.hpp"

using namespace qvi;

namespace {

Tolerances tight() {
  Tolerances t;
  t.tol_inner = 1e-12;
  t.tol_fixed_point = 1e-8;
  return t;
}

// Dense LU on the full space-time system of the unconstrained Neumann
// problem, as an independent oracle for the time stepper.  Each step
// solves (I/dt + A_N) y = y_prev/dt + b by Gaussian elimination without
// the tridiagonal shortcuts.
std::vector<double> dense_step(const std::vector<std::vector<double>>& A,
                               std::vector<double> rhs) {
  auto M = A;
  const std::size_t n = rhs.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(M[r][c]) > std::abs(M[piv][c])) piv = r;
    std::swap(M[c], M[piv]);
    std::swap(rhs[c], rhs[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      double f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      rhs[r] -= f * rhs[c];
    }
  }
  std::vector<double> y(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = rhs[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= M[r][k] * y[k];
    y[r] = s / M[r][r];
  }
  return y;
}

SpaceTimeFunction dense_neumann_oracle(const SpaceTimeGrid& g,
                                       const BoundaryControl& u) {
  const int m = g.space_nodes();
  const double h = g.space.h();
  const double a = 1.0 / (h * h);
  const double shift = 1.0 / g.dt();
  std::vector<std::vector<double>> A(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i) {
    bool boundary = i == 0 || i == m - 1;
    A[i][i] = (boundary ? a : 2.0 * a) + shift;
    if (i > 0) A[i][i - 1] = -a;
    if (i + 1 < m) A[i][i + 1] = -a;
  }
  A[0][1] = -a;
  A[m - 1][m - 2] = -a;
  SpaceTimeFunction y;
  y.grid = g;
  y.slices.push_back(neumann_grid_function(g, 0.0));
  for (int k = 1; k <= g.n_steps; ++k) {
    std::vector<double> rhs(m);
    for (int i = 0; i < m; ++i) rhs[i] = y.slices.back().values[i] * shift;
    rhs.front() += u.left[k] / h;
    rhs.back() += u.right[k] / h;
    GridFunction s = neumann_grid_function(g, 0.0);
    s.values = dense_step(A, rhs);
    y.slices.push_back(std::move(s));
  }
  return y;
}

}  // namespace

TEST_CASE("grid and control shapes") {
  SpaceTimeGrid g(Domain1D(4, 1.0), 10, 2.0);
  CHECK(g.dt() == doctest::Approx(0.2));
  CHECK(g.space_nodes() == 6);
  CHECK_THROWS_AS(SpaceTimeGrid(Domain1D(4, 1.0), 0, 1.0), std::invalid_argument);
  auto w = neumann_grid_function(g, 1.0);
  double total = 0.0;
  for (double wi : w.weights) total += wi;
  CHECK(total == doctest::Approx(1.0));  // trapezoid weights sum to the length
}

TEST_CASE("zero flux gives the zero trajectory") {
  SpaceTimeGrid g(Domain1D(8, 1.0), 16, 1.0);
  auto y = solve_parabolic_obstacle(g, ExtendedObstacle::top(),
                                    neumann_grid_function(g, 0.0),
                                    BoundaryControl::constant(g, 0.0), tight());
  for (const auto& s : y.slices) CHECK(norm(s, kInf) == 0.0);
}

TEST_CASE("unconstrained stepper matches a dense elimination oracle") {
  SpaceTimeGrid g(Domain1D(9, 1.0), 12, 0.5);
  auto u = BoundaryControl::constant(g, 0.0);
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(0.0, 3.0);
  for (auto& v : u.left) v = dist(rng);
  for (auto& v : u.right) v = dist(rng);
  auto y = solve_parabolic_obstacle(g, ExtendedObstacle::top(),
                                    neumann_grid_function(g, 0.0), u, tight());
  auto oracle = dense_neumann_oracle(g, u);
  for (int k = 0; k <= g.n_steps; ++k)
    CHECK(max_abs_diff(y.slices[k], oracle.slices[k]) < 1e-10);
}

TEST_CASE("positivity and comparison in the control") {
  SpaceTimeGrid g(Domain1D(8, 1.0), 16, 1.0);
  auto psi = neumann_grid_function(g, 0.1);
  auto p = ExtendedObstacle::finite(neumann_grid_function(g, 0.3));
  auto u1 = BoundaryControl::constant(g, 1.0);
  auto u2 = BoundaryControl::constant(g, 2.0);
  auto y1 = solve_parabolic_obstacle(g, p, psi, u1, tight());
  auto y2 = solve_parabolic_obstacle(g, p, psi, u2, tight());
  for (int k = 0; k <= g.n_steps; ++k) {
    CHECK(min_value(y1.slices[k]) >= 0.0);
    CHECK(le(y1.slices[k], y2.slices[k], 1e-11));
    // constraint y <= psi + p
    CHECK(le(y1.slices[k], add(psi, p.finite_value()), 1e-11));
  }
}

TEST_CASE("obstacle comparison and Lipschitz dependence") {
  SpaceTimeGrid g(Domain1D(8, 1.0), 16, 1.0);
  auto psi = neumann_grid_function(g, 0.1);
  auto u = BoundaryControl::constant(g, 2.0);
  auto p1 = neumann_grid_function(g, 0.2);
  auto p2 = neumann_grid_function(g, 0.35);
  auto y1 = solve_parabolic_obstacle(g, ExtendedObstacle::finite(p1), psi, u, tight());
  auto y2 = solve_parabolic_obstacle(g, ExtendedObstacle::finite(p2), psi, u, tight());
  for (int k = 0; k <= g.n_steps; ++k) {
    CHECK(le(y1.slices[k], y2.slices[k], 1e-11));
    CHECK(max_abs_diff(y1.slices[k], y2.slices[k]) <= 0.15 + 1e-10);
  }
}

TEST_CASE("heat solver reaches the steady source profile") {
  // -w'' = 1, w(0) = w(1) = 0 -> x(1-x)/2; for T >= 2 the transient has
  // decayed below 1%.
  SpaceTimeGrid g(Domain1D(31, 1.0), 128, 2.0);
  SpaceTimeFunction source;
  source.grid = g;
  GridFunction one = GridFunction::constant(g.space, 1.0);
  source.slices.assign(g.n_steps + 1, one);
  auto w = solve_heat(source, g);
  double err = 0.0;
  for (int i = 0; i < g.space.n_interior; ++i) {
    double x = g.space.x(i);
    err = std::max(err, std::abs(w.slices.back().values[i] - 0.5 * x * (1.0 - x)));
  }
  CHECK(err < 0.01 * 0.125);
  // zero source gives zero
  source.slices.assign(g.n_steps + 1, GridFunction::constant(g.space, 0.0));
  CHECK(norm(solve_heat(source, g).slices.back(), kInf) == 0.0);
}

TEST_CASE("input validation") {
  SpaceTimeGrid g(Domain1D(4, 1.0), 4, 1.0);
  auto psi = neumann_grid_function(g, 0.1);
  auto u = BoundaryControl::constant(g, 1.0);
  u.left[2] = -0.5;
  CHECK_THROWS_AS(solve_parabolic_obstacle(g, ExtendedObstacle::top(), psi, u, tight()),
                  std::invalid_argument);
  auto bad_psi = GridFunction::constant(g.space, 0.1);  // wrong node count
  CHECK_THROWS_AS(solve_parabolic_obstacle(g, ExtendedObstacle::top(), bad_psi,
                                           BoundaryControl::constant(g, 1.0), tight()),
                  std::invalid_argument);
}
