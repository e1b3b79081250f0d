#pragma once

#include <functional>
#include <utility>

#include "qvi/lattice.hpp"

namespace qvi {

enum class NonlinearityKind { Zero, Relu, Table };

// Scalar nonlinearity f: nondecreasing, globally Lipschitz, convex,
// f(0) = 0.  Relu is gamma * max(s, 0); Table interpolates sampled
// points piecewise-linearly with constant extrapolation.
struct Nonlinearity {
  NonlinearityKind kind = NonlinearityKind::Zero;
  double gamma = 0.0;
  std::vector<std::pair<double, double>> table;  // sorted by first

  static Nonlinearity zero() { return {}; }
  static Nonlinearity relu(double g);
  static Nonlinearity from_table(std::vector<std::pair<double, double>> pts);

  double operator()(double s) const;
  bool is_zero() const { return kind == NonlinearityKind::Zero; }
  // Solves a*z + f(z) = r for the unique root (a > 0, f nondecreasing).
  double solve_nodal(double a, double r) const;
};

struct EllipticOperator {
  Domain1D domain;
  Nonlinearity f;

  EllipticOperator(Domain1D d, Nonlinearity fn = Nonlinearity::zero())
      : domain(d), f(std::move(fn)) {
    if (d.singleton)
      throw std::invalid_argument("EllipticOperator: needs a 1-D domain");
  }
};

struct SolverFailure : std::runtime_error {
  GridFunction last_iterate;
  double last_residual;
  SolverFailure(const std::string& msg, GridFunction y, double res)
      : std::runtime_error(msg), last_iterate(std::move(y)), last_residual(res) {}
};

namespace detail {

// Obstacle problem for a tridiagonal M-matrix row pattern
//   diag_i y_i + off * (neighbors) + f(y_i) = rhs_i,   y_i <= upper_i,
// solved by projected SOR with nodewise nonlinear solves.  upper may be
// empty (no obstacle).  Used directly by the elliptic solver and, with a
// diagonal shift, by the implicit Euler steps of the parabolic solver.
struct TridiagObstacle {
  std::vector<double> diag;
  std::vector<double> off_lower;  // coefficient of y_{i-1} in row i (0 for i=0)
  std::vector<double> off_upper;  // coefficient of y_{i+1} in row i (0 for last)
  const Nonlinearity* f = nullptr;

  double residual(const std::vector<double>& y, const std::vector<double>& rhs,
                  const std::vector<double>* upper, double obstacle_scale) const;
  // One projected SOR sweep; returns the max nodal update magnitude.
  double sweep(std::vector<double>& y, const std::vector<double>& rhs,
               const std::vector<double>* upper, double omega) const;
  void solve(std::vector<double>& y, const std::vector<double>& rhs,
             const std::vector<double>* upper, double tol_inner, int max_inner,
             double omega, double obstacle_scale) const;
  double auto_omega() const;
};

}  // namespace detail

// Unique solution y of the discrete obstacle problem
//   A y + f(y) = u on {y < p},  y <= p,  A y + f(y) >= u on {y = p},
// with A the 3-point Dirichlet Laplacian.  Throws SolverFailure on
// non-convergence, std::invalid_argument on negative u.
GridFunction solve_obstacle(const EllipticOperator& op, const ExtendedObstacle& p,
                            const GridFunction& u, const Tolerances& tol);

// 0-D obstacle problem: S(p, u) = min(p, u), with Top giving u.
double solve_scalar_obstacle(const ExtendedObstacle& p, double u);

// Complementarity residual max_i |max(A y + f(y) - u, (y - p)/h)|; for the
// top obstacle this reduces to the plain equation residual.
double residual_vi(const EllipticOperator& op, const GridFunction& y,
                   const ExtendedObstacle& p, const GridFunction& u);

// Low-level access for convergence studies: runs n projected Gauss-Seidel
// sweeps (omega = 1) in place and returns the last update magnitude.
double pgs_sweeps(const EllipticOperator& op, const ExtendedObstacle& p,
                  const GridFunction& u, GridFunction& y, int n_sweeps);

}  // namespace qvi
