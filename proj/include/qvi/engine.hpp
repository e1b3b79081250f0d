#pragma once

#include <memory>
#include <optional>

#include "qvi/elliptic.hpp"
#include "qvi/lattice.hpp"
#include "qvi/obstacle_maps.hpp"
#include "qvi/parabolic.hpp"

namespace qvi {

// One concrete fixed-point problem y = S(Phi(y), u).  States and
// parameters are exchanged as flat GridFunctions; the parabolic instance
// flattens its space-time trajectory and boundary control into them.
class ProblemInstance {
 public:
  virtual ~ProblemInstance() = default;

  virtual GridFunction zero_state() const = 0;
  virtual GridFunction zero_parameter() const = 0;

  // S(pbar, u): the unconstrained solve, canonical supersolution.
  virtual GridFunction solve_unconstrained(const GridFunction& u) const = 0;
  // T_u(v) = S(Phi(v), u).
  virtual GridFunction apply_T(const GridFunction& v, const GridFunction& u) const = 0;

  // Closed-form directional derivative of Psi(v, u) = S(Phi(v), u) at
  // (y, u) in direction (zeta, h), when the instance has one.
  virtual std::optional<GridFunction> psi_derivative_closed(
      const GridFunction& y, const GridFunction& u, const GridFunction& zeta,
      const GridFunction& h) const {
    (void)y; (void)u; (void)zeta; (void)h;
    return std::nullopt;
  }

  // Refines a converged extremal iterate (the scalar instance sharpens
  // tangential fixed points by extended-precision bisection).
  virtual GridFunction polish(GridFunction y, const GridFunction& u,
                              bool maximal) const {
    (void)u; (void)maximal;
    return y;
  }

  // True when the smallest-fixed-point characterization of the derivative
  // applies (strict obstacle margin or concave map with positive value).
  bool linearization_characterizes() const { return characterizes_; }

  const Tolerances& tol() const { return tol_; }
  Tolerances& tol() { return tol_; }

 protected:
  Tolerances tol_;
  bool characterizes_ = false;
};

struct TraceRow {
  int k = 0;
  double residual = 0.0;      // ||y_{k+1} - y_k||_inf
  double min_violation = 0.0; // max nodewise decrease (ascent breach)
  double max_violation = 0.0; // max nodewise increase (descent breach)
};

struct QviSolution {
  GridFunction value;
  bool maximal = false;
  std::vector<TraceRow> trace;
  bool converged = false;
  int iterations = 0;
};

// Birkhoff-Tartar iteration from 0 upward / from S(pbar, u) downward.
QviSolution solve_minimal(const ProblemInstance& inst, const GridFunction& u);
QviSolution solve_maximal(const ProblemInstance& inst, const GridFunction& u);

bool is_subsolution(const ProblemInstance& inst, const GridFunction& u,
                    const GridFunction& v, double slack);
bool is_supersolution(const ProblemInstance& inst, const GridFunction& u,
                      const GridFunction& v, double slack);

// ||m(u) - M(u)||_inf <= slack.
bool check_uniqueness(const ProblemInstance& inst, const GridFunction& u,
                      double slack);

// 0-D instance: y = min(phi(y), u) on a single node.
class ScalarProblem : public ProblemInstance {
 public:
  explicit ScalarProblem(ScalarPhiVariant variant);

  GridFunction zero_state() const override { return GridFunction::scalar(0.0); }
  GridFunction zero_parameter() const override { return GridFunction::scalar(0.0); }
  GridFunction solve_unconstrained(const GridFunction& u) const override;
  GridFunction apply_T(const GridFunction& v, const GridFunction& u) const override;
  std::optional<GridFunction> psi_derivative_closed(
      const GridFunction& y, const GridFunction& u, const GridFunction& zeta,
      const GridFunction& h) const override;
  GridFunction polish(GridFunction y, const GridFunction& u,
                      bool maximal) const override;

  ScalarPhiVariant variant() const { return variant_; }

 private:
  ScalarPhiVariant variant_;
};

// Elliptic impulse-control instance on the interior Dirichlet grid.
class ImpulseProblem : public ProblemInstance {
 public:
  ImpulseProblem(EllipticOperator op, ImpulseConfig cfg, Tolerances tol);

  GridFunction zero_state() const override;
  GridFunction zero_parameter() const override { return zero_state(); }
  GridFunction solve_unconstrained(const GridFunction& u) const override;
  GridFunction apply_T(const GridFunction& v, const GridFunction& u) const override;

  const EllipticOperator& op() const { return op_; }
  const ImpulseConfig& config() const { return cfg_; }

 private:
  EllipticOperator op_;
  ImpulseConfig cfg_;
};

// Parabolic boundary-control instance.  State: slices 1..n_steps of the
// trajectory flattened time-major with weights dt * (spatial trapezoid
// weight).  Parameter: left flux then right flux, one per time level,
// weights dt.
class ParabolicProblem : public ProblemInstance {
 public:
  ParabolicProblem(SpaceTimeGrid grid, GridFunction psi, HeatNonlinearity g,
                   Tolerances tol);

  GridFunction zero_state() const override;
  GridFunction zero_parameter() const override;
  GridFunction solve_unconstrained(const GridFunction& u) const override;
  GridFunction apply_T(const GridFunction& v, const GridFunction& u) const override;

  GridFunction flatten_state(const SpaceTimeFunction& y) const;
  SpaceTimeFunction unflatten_state(const GridFunction& v) const;
  GridFunction flatten_control(const BoundaryControl& u) const;
  BoundaryControl unflatten_control(const GridFunction& u) const;

  const SpaceTimeGrid& grid() const { return grid_; }
  const GridFunction& psi() const { return psi_; }
  const HeatNonlinearity& g() const { return g_; }

 private:
  SpaceTimeGrid grid_;
  GridFunction psi_;
  HeatNonlinearity g_;
};

}  // namespace qvi
