#include "qvi/engine.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>

namespace qvi {

namespace {

QviSolution iterate_monotone(const ProblemInstance& inst, const GridFunction& u,
                             GridFunction y0, bool maximal) {
  const Tolerances& tol = inst.tol();
  tol.validate();
  const double slack = 10.0 * tol.tol_inner;
  QviSolution sol;
  sol.maximal = maximal;
  GridFunction y = std::move(y0);
  double last_residual = kInf;
  for (int k = 0; k < tol.max_outer; ++k) {
    GridFunction next = inst.apply_T(y, u);
    TraceRow row;
    row.k = k;
    double up = 0.0, down = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      double d = next.values[i] - y.values[i];
      up = std::max(up, d);
      down = std::max(down, -d);
    }
    row.residual = std::max(up, down);
    row.min_violation = down;  // breach of ascent from the subsolution
    row.max_violation = up;    // breach of descent from the supersolution
    sol.trace.push_back(row);
    last_residual = row.residual;
    double breach = maximal ? row.max_violation : row.min_violation;
    if (breach > slack)
      throw SolverFailure("monotone iteration left its ordered corridor",
                          std::move(next), breach);
    y = std::move(next);
    if (row.residual <= tol.tol_fixed_point) {
      sol.converged = true;
      sol.iterations = k + 1;
      break;
    }
  }
  if (!sol.converged)
    throw SolverFailure("fixed-point iteration exceeded max_outer",
                        std::move(y), last_residual);
  sol.value = inst.polish(std::move(y), u, maximal);
  return sol;
}

}  // namespace

QviSolution solve_minimal(const ProblemInstance& inst, const GridFunction& u) {
  return iterate_monotone(inst, u, inst.zero_state(), false);
}

QviSolution solve_maximal(const ProblemInstance& inst, const GridFunction& u) {
  return iterate_monotone(inst, u, inst.solve_unconstrained(u), true);
}

bool is_subsolution(const ProblemInstance& inst, const GridFunction& u,
                    const GridFunction& v, double slack) {
  return le(v, inst.apply_T(v, u), slack);
}

bool is_supersolution(const ProblemInstance& inst, const GridFunction& u,
                      const GridFunction& v, double slack) {
  return le(inst.apply_T(v, u), v, slack);
}

bool check_uniqueness(const ProblemInstance& inst, const GridFunction& u,
                      double slack) {
  auto m = solve_minimal(inst, u);
  auto M = solve_maximal(inst, u);
  return max_abs_diff(m.value, M.value) <= slack;
}

ScalarProblem::ScalarProblem(ScalarPhiVariant variant) : variant_(variant) {
  tol_.tol_fixed_point = 1e-8;
  // tangential fixed points decay like 1/k, so residual 1e-8 can take
  // ~1e4 cheap iterations
  tol_.max_outer = 200000;
  characterizes_ = variant == ScalarPhiVariant::C;
}

GridFunction ScalarProblem::solve_unconstrained(const GridFunction& u) const {
  return GridFunction::scalar(
      solve_scalar_obstacle(ExtendedObstacle::top(), u.values.at(0)));
}

GridFunction ScalarProblem::apply_T(const GridFunction& v,
                                    const GridFunction& u) const {
  double p = phi_scalar(v.values.at(0), variant_);
  auto obstacle = ExtendedObstacle::finite(GridFunction::scalar(p));
  return GridFunction::scalar(solve_scalar_obstacle(obstacle, u.values.at(0)));
}

std::optional<GridFunction> ScalarProblem::psi_derivative_closed(
    const GridFunction& y, const GridFunction& u, const GridFunction& zeta,
    const GridFunction& h) const {
  double s = y.values.at(0);
  double a = phi_scalar(s, variant_);
  double ap = phi_scalar_derivative(s, zeta.values.at(0), variant_);
  double u0 = u.values.at(0);
  double hp = h.values.at(0);
  double d = a < u0 ? ap : (a > u0 ? hp : std::min(ap, hp));
  return GridFunction::scalar(d);
}

GridFunction ScalarProblem::polish(GridFunction y, const GridFunction& u,
                                   bool maximal) const {
  // The discrete iteration stalls on tangential fixed points (error
  // decays like 1/k).  Extremal scalar solutions are localized instead
  // by bisection on the sub/supersolution predicate in quad precision:
  // M = sup{t : T(t) >= t}, m = inf{t : T(t) <= t} over [0, u].
  using quad = boost::multiprecision::cpp_bin_float_quad;
  const double u0 = u.values.at(0);
  if (u0 <= 0.0) return GridFunction::scalar(0.0);
  auto T = [&](const quad& t) {
    quad p = phi_scalar_t<quad>(t, variant_);
    return p < quad(u0) ? p : quad(u0);
  };
  quad lo = 0, hi = u0;
  if (maximal) {
    if (T(hi) >= hi) return GridFunction::scalar(u0);
    for (int it = 0; it < 200; ++it) {
      quad mid = (lo + hi) / 2;
      (T(mid) >= mid ? lo : hi) = mid;
    }
  } else {
    if (T(lo) <= lo) return GridFunction::scalar(0.0);
    for (int it = 0; it < 200; ++it) {
      quad mid = (lo + hi) / 2;
      (T(mid) <= mid ? hi : lo) = mid;
    }
  }
  (void)y;
  return GridFunction::scalar(static_cast<double>((lo + hi) / 2));
}

ImpulseProblem::ImpulseProblem(EllipticOperator op, ImpulseConfig cfg,
                               Tolerances tol)
    : op_(std::move(op)), cfg_(std::move(cfg)) {
  tol_ = tol;
  tol_.validate();
  cfg_.validate(op_.domain.n_interior);
  characterizes_ = cfg_.kappa > 0.0;
}

GridFunction ImpulseProblem::zero_state() const {
  return GridFunction::constant(op_.domain, 0.0);
}

GridFunction ImpulseProblem::solve_unconstrained(const GridFunction& u) const {
  return solve_obstacle(op_, ExtendedObstacle::top(), u, tol_);
}

GridFunction ImpulseProblem::apply_T(const GridFunction& v,
                                     const GridFunction& u) const {
  auto p = ExtendedObstacle::finite(phi_truncated_impulse(v, cfg_));
  return solve_obstacle(op_, p, u, tol_);
}

ParabolicProblem::ParabolicProblem(SpaceTimeGrid grid, GridFunction psi,
                                   HeatNonlinearity g, Tolerances tol)
    : grid_(grid), psi_(std::move(psi)), g_(g) {
  tol_ = tol;
  tol_.validate();
  if (static_cast<int>(psi_.size()) != grid_.space_nodes())
    throw std::invalid_argument("ParabolicProblem: psi does not match the grid");
  for (double v : psi_.values)
    if (!(v >= 0.0))
      throw std::invalid_argument("ParabolicProblem: psi must be nonnegative");
  characterizes_ = g_.eps > 0.0;
}

GridFunction ParabolicProblem::flatten_state(const SpaceTimeFunction& y) const {
  const int m = grid_.space_nodes();
  const double dt = grid_.dt();
  GridFunction flat;
  flat.values.reserve(static_cast<std::size_t>(grid_.n_steps) * m);
  flat.weights.reserve(flat.values.capacity());
  for (int k = 1; k <= grid_.n_steps; ++k) {
    const auto& s = y.slices[k];
    for (int i = 0; i < m; ++i) {
      flat.values.push_back(s.values[i]);
      flat.weights.push_back(dt * s.weights[i]);
    }
  }
  return flat;
}

SpaceTimeFunction ParabolicProblem::unflatten_state(const GridFunction& v) const {
  const int m = grid_.space_nodes();
  if (static_cast<int>(v.size()) != grid_.n_steps * m)
    throw std::invalid_argument("ParabolicProblem: state length mismatch");
  SpaceTimeFunction y;
  y.grid = grid_;
  y.slices.reserve(grid_.n_steps + 1);
  y.slices.push_back(neumann_grid_function(grid_, 0.0));
  for (int k = 0; k < grid_.n_steps; ++k) {
    GridFunction s = neumann_grid_function(grid_, 0.0);
    for (int i = 0; i < m; ++i) s.values[i] = v.values[k * m + i];
    y.slices.push_back(std::move(s));
  }
  return y;
}

GridFunction ParabolicProblem::flatten_control(const BoundaryControl& u) const {
  GridFunction flat;
  const double dt = grid_.dt();
  for (double v : u.left) {
    flat.values.push_back(v);
    flat.weights.push_back(dt);
  }
  for (double v : u.right) {
    flat.values.push_back(v);
    flat.weights.push_back(dt);
  }
  return flat;
}

BoundaryControl ParabolicProblem::unflatten_control(const GridFunction& u) const {
  const int len = grid_.n_steps + 1;
  if (static_cast<int>(u.size()) != 2 * len)
    throw std::invalid_argument("ParabolicProblem: control length mismatch");
  BoundaryControl c;
  c.left.assign(u.values.begin(), u.values.begin() + len);
  c.right.assign(u.values.begin() + len, u.values.end());
  return c;
}

GridFunction ParabolicProblem::zero_state() const {
  SpaceTimeFunction y;
  y.grid = grid_;
  y.slices.assign(grid_.n_steps + 1, neumann_grid_function(grid_, 0.0));
  return flatten_state(y);
}

GridFunction ParabolicProblem::zero_parameter() const {
  return flatten_control(BoundaryControl::constant(grid_, 0.0));
}

GridFunction ParabolicProblem::solve_unconstrained(const GridFunction& u) const {
  auto y = solve_parabolic_obstacle(grid_, ExtendedObstacle::top(), psi_,
                                    unflatten_control(u), tol_);
  return flatten_state(y);
}

GridFunction ParabolicProblem::apply_T(const GridFunction& v,
                                       const GridFunction& u) const {
  auto traj = unflatten_state(v);
  auto p = ExtendedObstacle::finite(phi_heat(traj, g_, grid_));
  auto y = solve_parabolic_obstacle(grid_, p, psi_, unflatten_control(u), tol_);
  return flatten_state(y);
}

}  // namespace qvi
