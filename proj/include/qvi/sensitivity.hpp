#pragma once

#include "qvi/engine.hpp"

namespace qvi {

// Geometric schedule tau_n = tau0 * ratio^n, truncated so u + tau*h
// stays a nonnegative parameter.
struct TauSchedule {
  double tau0 = 0.125;
  double ratio = 0.5;
  int count = 20;

  void validate() const;
  // Admissible values, clamped to (min u) / (2 * ||h^-||_inf) when h has
  // a negative part; empty when no positive tau is admissible.
  std::vector<double> admissible(const GridFunction& u, const GridFunction& h) const;
};

struct DerivativeEstimate {
  std::vector<double> taus;
  std::vector<GridFunction> quotients;
  GridFunction derivative;  // last quotient, a certified lower bound
  double monotonicity_residual = 0.0;
  double cauchy_residual = 0.0;
};

struct LipschitzReport {
  double q = kInf;
  double rho = 0.0;
  double lhs_min = 0.0, bound_min = 0.0;
  double lhs_max = 0.0, bound_max = 0.0;
  bool satisfied = false;
};

// Stability estimate ||m(u) - m(v)||_q <= (1/rho) ||m(u)||_q ||u - v||_inf
// and its M analogue.  Requires 0 < rho < min u and ||u - v||_inf <= min u - rho.
LipschitzReport lipschitz_certificate(const ProblemInstance& inst,
                                      const GridFunction& u, const GridFunction& v,
                                      double q, double rho, double slack = 1e-8);

// lambda*M(u1) + (1-lambda)*M(u2) <= M(lambda*u1 + (1-lambda)*u2) + slack.
bool concavity_check(const ProblemInstance& inst, const GridFunction& u1,
                     const GridFunction& u2, double lambda, double slack);

// Monotone difference quotients (M(u + tau*h) - M(u))/tau along the
// shrinking schedule; they are nodewise nondecreasing and converge to the
// directional derivative of M from above in tau.
DerivativeEstimate directional_derivative(const ProblemInstance& inst,
                                          const GridFunction& u,
                                          const GridFunction& h,
                                          const TauSchedule& schedule);

struct HadamardReport {
  GridFunction derivative;
  std::vector<double> errors;  // ||(M(u + tau_n h_n) - M(u))/tau_n - M'(u;h)||_q
};

// Hadamard mode: quotients taken along perturbed directions h_n -> h
// must still converge to the fixed-direction derivative.
HadamardReport hadamard_check(const ProblemInstance& inst, const GridFunction& u,
                              const GridFunction& h,
                              const std::vector<std::pair<double, GridFunction>>& perturbations,
                              double q, const TauSchedule& schedule);

// Directional derivative of Psi(v, u) = S(Phi(v), u) at (y, u) in the
// direction (zeta, h): closed form when the instance has one, otherwise
// the limit of inner difference quotients along a sigma-schedule.
// Throws when the schedule is exhausted before the Cauchy residual
// reaches tol.
GridFunction psi_directional_derivative(const ProblemInstance& inst,
                                        const GridFunction& y, const GridFunction& u,
                                        const GridFunction& zeta, const GridFunction& h,
                                        const TauSchedule& schedule, double tol,
                                        double* cauchy_out = nullptr);

// Smallest fixed point of zeta -> Psi'((M(u), u); (zeta, h)), computed by
// Kleene iteration seeded at a difference quotient (a subsolution of the
// linearized problem).  Refuses when the instance's linearization is
// degenerate (every zeta is a fixed point, so the smallest element
// carries no information).
GridFunction solve_linearized_smallest(const ProblemInstance& inst,
                                       const GridFunction& u, const GridFunction& h,
                                       const TauSchedule& schedule, double tol);

struct CharacterizationReport {
  GridFunction derivative;
  GridFunction linearized;
  double mismatch = 0.0;             // ||derivative - linearized||_q
  double fixed_point_residual = 0.0; // ||Psi'(derivative) - derivative||_inf
};

// Cross-oracle: the quotient-limit derivative and the linearized smallest
// fixed point must coincide, and the derivative must itself be a fixed
// point of Psi'.
CharacterizationReport characterization_check(const ProblemInstance& inst,
                                              const GridFunction& u,
                                              const GridFunction& h, double q,
                                              const TauSchedule& schedule,
                                              double tol);

}  // namespace qvi
