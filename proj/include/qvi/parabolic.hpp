#pragma once

#include "qvi/elliptic.hpp"
#include "qvi/lattice.hpp"

namespace qvi {

// Space-time grid for the Neumann problem: the spatial grid keeps both
// boundary nodes (their values are unknowns), time levels t_k = k*dt.
struct SpaceTimeGrid {
  Domain1D space;
  int n_steps = 1;
  double T = 1.0;

  SpaceTimeGrid() = default;
  SpaceTimeGrid(Domain1D s, int steps, double final_time)
      : space(s), n_steps(steps), T(final_time) {
    if (steps <= 0) throw std::invalid_argument("SpaceTimeGrid: n_steps must be positive");
    if (!(final_time > 0.0)) throw std::invalid_argument("SpaceTimeGrid: T must be positive");
  }

  double dt() const { return T / n_steps; }
  int space_nodes() const { return space.n_interior + 2; }

  bool operator==(const SpaceTimeGrid&) const = default;
};

// Nonnegative flux data on (0,T) x {0, length}, one value per time level.
struct BoundaryControl {
  std::vector<double> left, right;

  static BoundaryControl constant(const SpaceTimeGrid& g, double v) {
    BoundaryControl u;
    u.left.assign(g.n_steps + 1, v);
    u.right.assign(g.n_steps + 1, v);
    return u;
  }
};

// Trajectory of grid functions, slice k at time t_k; slice 0 is the
// (zero) initial condition.
struct SpaceTimeFunction {
  SpaceTimeGrid grid;
  std::vector<GridFunction> slices;
};

// Quadrature weights over the Neumann spatial grid: h at interior nodes,
// h/2 at the two boundary nodes (trapezoidal, sums to the length).
GridFunction neumann_grid_function(const SpaceTimeGrid& g, double c);

// Implicit Euler solution of the parabolic obstacle problem: at each step
// the operator I/dt + A_N is solved with constraint y <= psi + p, flux u
// entering the boundary rows.  p and psi live on the Neumann spatial grid.
SpaceTimeFunction solve_parabolic_obstacle(const SpaceTimeGrid& grid,
                                           const ExtendedObstacle& p,
                                           const GridFunction& psi,
                                           const BoundaryControl& u,
                                           const Tolerances& tol);

// Implicit Euler heat equation with homogeneous Dirichlet data and zero
// initial condition; source slices live on the interior (Dirichlet) grid.
SpaceTimeFunction solve_heat(const SpaceTimeFunction& source,
                             const SpaceTimeGrid& grid);

}  // namespace qvi
