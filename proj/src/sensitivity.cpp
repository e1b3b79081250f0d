#include "qvi/sensitivity.hpp"

#include <cmath>

namespace qvi {

void TauSchedule::validate() const {
  if (!(tau0 > 0.0)) throw std::invalid_argument("TauSchedule: tau0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("TauSchedule: ratio must lie in (0,1)");
  if (count <= 0) throw std::invalid_argument("TauSchedule: count must be positive");
}

std::vector<double> TauSchedule::admissible(const GridFunction& u,
                                            const GridFunction& h) const {
  validate();
  require_same_space(u, h, "TauSchedule::admissible");
  double c = min_value(u);
  double h_neg = std::max(0.0, -min_value(h));
  double t0 = tau0;
  if (h_neg > 0.0) {
    double cap = c / (2.0 * h_neg);
    t0 = std::min(t0, cap);
  }
  std::vector<double> taus;
  if (!(t0 > 0.0)) return taus;
  double t = t0;
  for (int n = 0; n < count; ++n, t *= ratio) taus.push_back(t);
  return taus;
}

LipschitzReport lipschitz_certificate(const ProblemInstance& inst,
                                      const GridFunction& u, const GridFunction& v,
                                      double q, double rho, double slack) {
  double c = min_value(u);
  if (!(rho > 0.0 && rho < c))
    throw std::invalid_argument("lipschitz_certificate: need 0 < rho < min u");
  double pert = max_abs_diff(u, v);
  if (pert > c - rho + 1e-12)
    throw std::invalid_argument("lipschitz_certificate: ||u - v||_inf exceeds min u - rho");

  auto m_u = solve_minimal(inst, u).value;
  auto m_v = solve_minimal(inst, v).value;
  auto M_u = solve_maximal(inst, u).value;
  auto M_v = solve_maximal(inst, v).value;

  LipschitzReport r;
  r.q = q;
  r.rho = rho;
  r.lhs_min = norm(sub(m_u, m_v), q);
  r.lhs_max = norm(sub(M_u, M_v), q);
  r.bound_min = norm(m_u, q) * pert / rho;
  r.bound_max = norm(M_u, q) * pert / rho;
  r.satisfied = r.lhs_min <= r.bound_min + slack && r.lhs_max <= r.bound_max + slack;
  return r;
}

bool concavity_check(const ProblemInstance& inst, const GridFunction& u1,
                     const GridFunction& u2, double lambda, double slack) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("concavity_check: lambda must lie in [0,1]");
  auto M1 = solve_maximal(inst, u1).value;
  auto M2 = solve_maximal(inst, u2).value;
  auto combo = axpy(scale(M1, lambda), 1.0 - lambda, M2);
  auto M_mix = solve_maximal(inst, axpy(scale(u1, lambda), 1.0 - lambda, u2)).value;
  return le(combo, M_mix, slack);
}

DerivativeEstimate directional_derivative(const ProblemInstance& inst,
                                          const GridFunction& u,
                                          const GridFunction& h,
                                          const TauSchedule& schedule) {
  auto taus = schedule.admissible(u, h);
  if (taus.empty())
    throw std::invalid_argument("directional_derivative: no admissible tau (u + tau*h leaves the parameter cone)");

  auto M_base = solve_maximal(inst, u).value;
  DerivativeEstimate est;
  for (double tau : taus) {
    auto M_tau = solve_maximal(inst, axpy(u, tau, h)).value;
    est.quotients.push_back(scale(sub(M_tau, M_base), 1.0 / tau));
    est.taus.push_back(tau);
    std::size_t n = est.quotients.size();
    if (n >= 2 && max_abs_diff(est.quotients[n - 1], est.quotients[n - 2]) == 0.0)
      break;  // quotient frozen exactly (piecewise affine regime)
  }
  for (std::size_t n = 0; n + 1 < est.quotients.size(); ++n) {
    const auto& a = est.quotients[n];
    const auto& b = est.quotients[n + 1];
    for (std::size_t i = 0; i < a.size(); ++i)
      est.monotonicity_residual =
          std::max(est.monotonicity_residual, a.values[i] - b.values[i]);
  }
  est.derivative = est.quotients.back();
  est.cauchy_residual =
      est.quotients.size() >= 2
          ? max_abs_diff(est.quotients.back(), est.quotients[est.quotients.size() - 2])
          : kInf;
  return est;
}

HadamardReport hadamard_check(const ProblemInstance& inst, const GridFunction& u,
                              const GridFunction& h,
                              const std::vector<std::pair<double, GridFunction>>& perturbations,
                              double q, const TauSchedule& schedule) {
  HadamardReport r;
  r.derivative = directional_derivative(inst, u, h, schedule).derivative;
  auto M_base = solve_maximal(inst, u).value;
  for (std::size_t n = 0; n < perturbations.size(); ++n) {
    const auto& [tau, hn] = perturbations[n];
    auto u_pert = axpy(u, tau, hn);
    if (!(tau > 0.0) || min_value(u_pert) < 0.0)
      throw std::invalid_argument("hadamard_check: inadmissible perturbation at index " +
                                  std::to_string(n));
    auto quotient = scale(sub(solve_maximal(inst, u_pert).value, M_base), 1.0 / tau);
    r.errors.push_back(norm(sub(quotient, r.derivative), q));
  }
  return r;
}

GridFunction psi_directional_derivative(const ProblemInstance& inst,
                                        const GridFunction& y, const GridFunction& u,
                                        const GridFunction& zeta, const GridFunction& h,
                                        const TauSchedule& schedule, double tol,
                                        double* cauchy_out) {
  if (auto closed = inst.psi_derivative_closed(y, u, zeta, h)) {
    if (cauchy_out) *cauchy_out = 0.0;
    return *closed;
  }
  auto sigmas = schedule.admissible(u, h);
  if (sigmas.empty())
    throw std::invalid_argument("psi_directional_derivative: no admissible sigma");

  auto base = inst.apply_T(y, u);
  std::vector<GridFunction> quotients;
  for (double sigma : sigmas) {
    auto shifted = inst.apply_T(axpy(y, sigma, zeta), axpy(u, sigma, h));
    quotients.push_back(scale(sub(shifted, base), 1.0 / sigma));
    std::size_t n = quotients.size();
    if (n >= 2 && max_abs_diff(quotients[n - 1], quotients[n - 2]) == 0.0) break;
  }
  double cauchy = quotients.size() >= 2
                      ? max_abs_diff(quotients.back(), quotients[quotients.size() - 2])
                      : kInf;
  if (cauchy_out) *cauchy_out = cauchy;
  if (!(cauchy <= tol))
    throw SolverFailure("psi_directional_derivative: sigma-schedule exhausted before the Cauchy residual reached tol",
                        quotients.back(), cauchy);
  return quotients.back();
}

GridFunction solve_linearized_smallest(const ProblemInstance& inst,
                                       const GridFunction& u, const GridFunction& h,
                                       const TauSchedule& schedule, double tol) {
  if (!inst.linearization_characterizes())
    throw std::domain_error("solve_linearized_smallest: degenerate linearization (every zeta is a fixed point of Psi'); the smallest-fixed-point characterization carries no information here, refusing");

  auto M = solve_maximal(inst, u).value;
  // A difference quotient is a subsolution of the linearized problem, so
  // Kleene iteration from it climbs to the smallest fixed point above it.
  GridFunction zeta = directional_derivative(inst, u, h, schedule).derivative;
  const Tolerances& t = inst.tol();
  const double slack = 10.0 * std::max(t.tol_inner, tol);
  for (int k = 0; k < t.max_outer; ++k) {
    auto next = psi_directional_derivative(inst, M, u, zeta, h, schedule, kInf);
    double descent = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i)
      descent = std::max(descent, zeta.values[i] - next.values[i]);
    if (descent > slack)
      throw SolverFailure("solve_linearized_smallest: Kleene iterate decreased",
                          std::move(next), descent);
    double diff = max_abs_diff(next, zeta);
    zeta = std::move(next);
    if (diff <= tol) return zeta;
  }
  throw SolverFailure("solve_linearized_smallest: Kleene iteration did not converge",
                      std::move(zeta), kInf);
}

CharacterizationReport characterization_check(const ProblemInstance& inst,
                                              const GridFunction& u,
                                              const GridFunction& h, double q,
                                              const TauSchedule& schedule,
                                              double tol) {
  CharacterizationReport r;
  r.derivative = directional_derivative(inst, u, h, schedule).derivative;
  r.linearized = solve_linearized_smallest(inst, u, h, schedule, tol);
  r.mismatch = norm(sub(r.derivative, r.linearized), q);
  auto M = solve_maximal(inst, u).value;
  auto psi_of_deriv =
      psi_directional_derivative(inst, M, u, r.derivative, h, schedule, kInf);
  r.fixed_point_residual = max_abs_diff(psi_of_deriv, r.derivative);
  return r;
}

}  // namespace qvi
