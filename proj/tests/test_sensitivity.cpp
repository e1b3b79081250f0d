#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "qvi/sensitivity.hpp"

using namespace qvi;

namespace {

Tolerances pde_tol() {
  Tolerances t;
  t.tol_inner = 1e-13;
  t.tol_fixed_point = 1e-11;
  return t;
}

ImpulseProblem desk_impulse(int n = 24) {
  Domain1D d(n, 1.0);
  return ImpulseProblem(EllipticOperator(d), ImpulseConfig::zero_cost(1.0, n),
                        pde_tol());
}

TauSchedule pde_schedule() {
  TauSchedule s;
  s.count = 8;
  return s;
}

double deriv_scalar(const ProblemInstance& inst, double u, double h,
                    const TauSchedule& s = TauSchedule{}) {
  return directional_derivative(inst, GridFunction::scalar(u),
                                GridFunction::scalar(h), s)
      .derivative.values[0];
}

// scalar variant with the closed-form Psi' hidden, to exercise the inner
// finite-difference path
struct ScalarFd : ScalarProblem {
  using ScalarProblem::ScalarProblem;
  std::optional<GridFunction> psi_derivative_closed(const GridFunction&,
                                                    const GridFunction&,
                                                    const GridFunction&,
                                                    const GridFunction&) const override {
    return std::nullopt;
  }
};

}  // namespace

TEST_CASE("tau schedule admissibility") {
  TauSchedule s;
  auto u = GridFunction::scalar(1.0);
  auto taus = s.admissible(u, GridFunction::scalar(-1.0));
  CHECK(taus.size() == 20);
  CHECK(taus[0] == 0.125);
  CHECK(taus[1] == 0.0625);
  // clamp to (min u)/(2 |h^-|)
  auto small = s.admissible(GridFunction::scalar(0.1), GridFunction::scalar(-1.0));
  CHECK(small[0] == doctest::Approx(0.05));
  // no admissible tau when u hits zero against a negative direction
  CHECK(s.admissible(GridFunction::scalar(0.0), GridFunction::scalar(-1.0)).empty());
  s.ratio = 1.5;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("scalar directional derivatives of variant A") {
  ScalarProblem a(ScalarPhiVariant::A);
  struct Row { double u, h, want; };
  for (auto [u, h, want] : {Row{0.5, 1, 1}, Row{0.5, -1, -1}, Row{1, 1, 0},
                            Row{1, -1, -1}, Row{2, 1, 0}, Row{2, -1, 0}}) {
    auto est = directional_derivative(a, GridFunction::scalar(u),
                                      GridFunction::scalar(h), TauSchedule{});
    CHECK(std::abs(est.derivative.values[0] - want) <= 1e-8);
    CHECK(est.monotonicity_residual <= 1e-12);
  }
}

TEST_CASE("scalar directional derivatives of variant C") {
  ScalarProblem c(ScalarPhiVariant::C);
  for (double h : {1.0, -1.0}) {
    CHECK(std::abs(deriv_scalar(c, 0.5, h) - h) <= 1e-8);
    CHECK(std::abs(deriv_scalar(c, 1.5, h) - h) <= 1e-8);
    CHECK(std::abs(deriv_scalar(c, 3.0, h) - 0.0) <= 1e-8);
  }
  CHECK(std::abs(deriv_scalar(c, 1.0, 1.0) - 1.0) <= 1e-8);
}

TEST_CASE("lipschitz certificate on the closing scalar example") {
  ScalarProblem b(ScalarPhiVariant::B);
  auto r = lipschitz_certificate(b, GridFunction::scalar(2.0),
                                 GridFunction::scalar(1.9), kInf, 1.9);
  CHECK(r.lhs_max == doctest::Approx(0.1));
  CHECK(r.bound_max == doctest::Approx(2.0 * 0.1 / 1.9));
  CHECK(r.lhs_min == doctest::Approx(0.0));
  CHECK(r.satisfied);

  // v = u degenerates to 0 <= 0
  auto same = lipschitz_certificate(b, GridFunction::scalar(2.0),
                                    GridFunction::scalar(2.0), 2.0, 1.0);
  CHECK(same.lhs_max == 0.0);
  CHECK(same.satisfied);

  CHECK_THROWS_AS(lipschitz_certificate(b, GridFunction::scalar(2.0),
                                        GridFunction::scalar(1.9), kInf, 2.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(lipschitz_certificate(b, GridFunction::scalar(2.0),
                                        GridFunction::scalar(0.5), kInf, 1.9),
                  std::invalid_argument);
}

TEST_CASE("concavity of the maximal map") {
  ScalarProblem a(ScalarPhiVariant::A);
  CHECK(concavity_check(a, GridFunction::scalar(0.0), GridFunction::scalar(2.0),
                        0.5, 1e-10));
  CHECK(concavity_check(a, GridFunction::scalar(0.0), GridFunction::scalar(2.0),
                        0.0, 1e-12));
  CHECK(concavity_check(a, GridFunction::scalar(0.0), GridFunction::scalar(2.0),
                        1.0, 1e-12));
  CHECK_THROWS_AS(concavity_check(a, GridFunction::scalar(1.0),
                                  GridFunction::scalar(1.0), 1.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("degenerate linearization refuses but Psi' is the identity") {
  ScalarProblem a(ScalarPhiVariant::A);
  auto u = GridFunction::scalar(2.0);
  CHECK_THROWS_AS(solve_linearized_smallest(a, u, GridFunction::scalar(1.0),
                                            TauSchedule{}, 1e-10),
                  std::domain_error);
  // at y = M(2) = 1 the map has slope 1 on both sides: Psi'(zeta) = zeta
  auto y = GridFunction::scalar(1.0);
  for (double zeta : {-1.0, 0.0, 2.0}) {
    auto d = psi_directional_derivative(a, y, u, GridFunction::scalar(zeta),
                                        GridFunction::scalar(0.0), TauSchedule{}, 1e-10);
    CHECK(std::abs(d.values[0] - zeta) <= 1e-10);
  }
}

TEST_CASE("linearized smallest solution on variant C") {
  ScalarProblem c(ScalarPhiVariant::C);
  auto z = solve_linearized_smallest(c, GridFunction::scalar(3.0),
                                     GridFunction::scalar(1.0), TauSchedule{}, 1e-12);
  CHECK(std::abs(z.values[0] - 0.0) <= 1e-10);
  z = solve_linearized_smallest(c, GridFunction::scalar(1.0),
                                GridFunction::scalar(-0.5), TauSchedule{}, 1e-12);
  CHECK(std::abs(z.values[0] + 0.5) <= 1e-10);
}

TEST_CASE("characterization cross-oracle on variant C") {
  ScalarProblem c(ScalarPhiVariant::C);
  struct Row { double u, h, want; };
  for (auto [u, h, want] :
       {Row{0.5, 1, 1}, Row{1.5, 1, 1}, Row{3, 1, 0},
        Row{0.5, -1, -1}, Row{1.5, -1, -1}, Row{3, -1, 0}}) {
    auto rep = characterization_check(c, GridFunction::scalar(u),
                                      GridFunction::scalar(h), kInf,
                                      TauSchedule{}, 1e-12);
    CHECK(rep.mismatch <= 1e-8);
    CHECK(std::abs(rep.derivative.values[0] - want) <= 1e-8);
    CHECK(rep.fixed_point_residual <= 1e-8);
  }
}

TEST_CASE("closed-form and finite-difference Psi' agree at affine points") {
  for (auto variant : {ScalarPhiVariant::B, ScalarPhiVariant::C}) {
    ScalarProblem closed(variant);
    ScalarFd fd(variant);
    // stay away from the kinks of phi and from phi(y) == u ties
    struct Pt { double y, u, zeta, h; };
    for (auto [y, u, zeta, h] : {Pt{1.5, 3.0, 1.0, 0.5}, Pt{1.5, 1.2, -0.5, 1.0},
                                 Pt{0.5, 4.0, 2.0, -0.25}}) {
      auto a = psi_directional_derivative(closed, GridFunction::scalar(y),
                                          GridFunction::scalar(u),
                                          GridFunction::scalar(zeta),
                                          GridFunction::scalar(h), TauSchedule{}, 1e-9);
      auto b = psi_directional_derivative(fd, GridFunction::scalar(y),
                                          GridFunction::scalar(u),
                                          GridFunction::scalar(zeta),
                                          GridFunction::scalar(h), TauSchedule{}, 1e-9);
      CHECK(std::abs(a.values[0] - b.values[0]) <= 1e-9);
    }
  }
}

TEST_CASE("hadamard errors vanish where the maximal map is flat") {
  ScalarProblem a(ScalarPhiVariant::A);
  std::vector<std::pair<double, GridFunction>> perturbations;
  for (int n = 1; n <= 6; ++n)
    perturbations.emplace_back(0.125 / n, GridFunction::scalar(1.0 + 1.0 / n));
  auto rep = hadamard_check(a, GridFunction::scalar(2.0), GridFunction::scalar(1.0),
                            perturbations, kInf, TauSchedule{});
  for (double e : rep.errors) CHECK(e <= 1e-10);
  perturbations[2].first = -1.0;
  CHECK_THROWS_AS(hadamard_check(a, GridFunction::scalar(2.0),
                                 GridFunction::scalar(1.0), perturbations, kInf,
                                 TauSchedule{}),
                  std::invalid_argument);
}

TEST_CASE("impulse sensitivity: quotients, seeding, cross-oracle") {
  auto imp = desk_impulse();
  auto u = GridFunction::constant(imp.op().domain, 8.0);
  auto h = GridFunction::constant(imp.op().domain, 1.0);
  auto est = directional_derivative(imp, u, h, pde_schedule());
  CHECK(est.monotonicity_residual <= 2e-9);
  // every quotient is dominated by the derivative
  for (const auto& q : est.quotients)
    CHECK(le(q, est.derivative, 2e-9));
  // derivative bound from the Lipschitz estimate
  auto M = solve_maximal(imp, u).value;
  double rho = 4.0;
  CHECK(norm(est.derivative, 2.0) <=
        norm(M, 2.0) * norm(h, kInf) / rho + 1e-6);

  // difference-quotient seed is a subsolution of the linearized problem
  auto psi_seed = psi_directional_derivative(imp, M, u, est.derivative, h,
                                             pde_schedule(), kInf);
  double breach = 0.0;
  for (std::size_t i = 0; i < psi_seed.size(); ++i)
    breach = std::max(breach, est.derivative.values[i] - psi_seed.values[i]);
  CHECK(breach <= 2e-9);

  auto rep = characterization_check(imp, u, h, kInf, pde_schedule(), 1e-10);
  CHECK(rep.mismatch <= 2e-9);
  CHECK(rep.fixed_point_residual <= 2e-9);
}

TEST_CASE("parabolic sensitivity desk check") {
  SpaceTimeGrid g(Domain1D(8, 1.0), 12, 1.0);
  ParabolicProblem par(g, neumann_grid_function(g, 0.1), HeatNonlinearity{0.5},
                       pde_tol());
  auto u = par.zero_parameter();
  for (double& x : u.values) x = 2.0;
  auto h = par.zero_parameter();
  for (std::size_t i = 0; i < h.size(); ++i) h.values[i] = i % 2 ? 1.0 : 0.5;
  auto est = directional_derivative(par, u, h, pde_schedule());
  CHECK(est.monotonicity_residual <= 5e-9);
  auto rep = characterization_check(par, u, h, kInf, pde_schedule(), 1e-10);
  CHECK(rep.mismatch <= 5e-9);
}
