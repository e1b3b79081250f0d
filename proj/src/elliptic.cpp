#include "qvi/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace qvi {

Nonlinearity Nonlinearity::relu(double g) {
  if (!(g >= 0.0)) throw std::invalid_argument("Nonlinearity::relu: gamma must be >= 0");
  Nonlinearity f;
  f.kind = NonlinearityKind::Relu;
  f.gamma = g;
  return f;
}

Nonlinearity Nonlinearity::from_table(std::vector<std::pair<double, double>> pts) {
  if (pts.size() < 2)
    throw std::invalid_argument("Nonlinearity::from_table: need at least two points");
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second < pts[i - 1].second)
      throw std::invalid_argument("Nonlinearity::from_table: table must be nondecreasing");
  Nonlinearity f;
  f.kind = NonlinearityKind::Table;
  f.table = std::move(pts);
  if (std::abs(f(0.0)) > 1e-12)
    throw std::invalid_argument("Nonlinearity::from_table: f(0) must be 0");
  return f;
}

double Nonlinearity::operator()(double s) const {
  switch (kind) {
    case NonlinearityKind::Zero:
      return 0.0;
    case NonlinearityKind::Relu:
      return gamma * std::max(s, 0.0);
    case NonlinearityKind::Table: {
      if (s <= table.front().first) return table.front().second;
      if (s >= table.back().first) return table.back().second;
      auto it = std::upper_bound(table.begin(), table.end(),
                                 std::make_pair(s, kInf));
      auto lo = std::prev(it);
      double t = (s - lo->first) / (it->first - lo->first);
      return lo->second + t * (it->second - lo->second);
    }
  }
  return 0.0;
}

double Nonlinearity::solve_nodal(double a, double r) const {
  switch (kind) {
    case NonlinearityKind::Zero:
      return r / a;
    case NonlinearityKind::Relu:
      return r > 0.0 ? r / (a + gamma) : r / a;
    case NonlinearityKind::Table: {
      // a*z + f(z) - r is strictly increasing; bracket and bisect.
      double span = (std::abs(r) + std::abs((*this)(0.0))) / a + 1.0;
      double lo = -span, hi = span;
      while (a * lo + (*this)(lo) > r) lo *= 2.0;
      while (a * hi + (*this)(hi) < r) hi *= 2.0;
      for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (a * mid + (*this)(mid) < r)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return r / a;
}

namespace detail {

double TridiagObstacle::residual(const std::vector<double>& y,
                                 const std::vector<double>& rhs,
                                 const std::vector<double>* upper,
                                 double obstacle_scale) const {
  const std::size_t n = y.size();
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double ax = diag[i] * y[i] + (*f)(y[i]) - rhs[i];
    if (i > 0) ax += off_lower[i] * y[i - 1];
    if (i + 1 < n) ax += off_upper[i] * y[i + 1];
    // upper obstacle: residual 0 iff either the row equation holds or the
    // node is in contact with a nonpositive row defect
    double r = ax;
    if (upper) r = std::max(ax, (y[i] - (*upper)[i]) * obstacle_scale);
    m = std::max(m, std::abs(r));
  }
  return m;
}

double TridiagObstacle::sweep(std::vector<double>& y,
                              const std::vector<double>& rhs,
                              const std::vector<double>* upper,
                              double omega) const {
  const std::size_t n = y.size();
  double diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = rhs[i];
    if (i > 0) r -= off_lower[i] * y[i - 1];
    if (i + 1 < n) r -= off_upper[i] * y[i + 1];
    double z = f->solve_nodal(diag[i], r);
    double cand = y[i] + omega * (z - y[i]);
    if (upper) cand = std::min(cand, (*upper)[i]);
    diff = std::max(diff, std::abs(cand - y[i]));
    y[i] = cand;
  }
  return diff;
}

double TridiagObstacle::auto_omega() const {
  const std::size_t n = diag.size();
  if (n < 3) return 1.0;
  std::size_t mid = n / 2;
  double rho = (std::abs(off_lower[mid]) + std::abs(off_upper[mid])) / diag[mid] *
               std::cos(M_PI / static_cast<double>(n + 1));
  if (!(rho > 0.0 && rho < 1.0)) return 1.0;
  double w = 2.0 / (1.0 + std::sqrt(1.0 - rho * rho));
  return std::clamp(w, 1.0, 1.95);
}

namespace {

// Direct Thomas solve for the unconstrained linear case.
void thomas(const TridiagObstacle& m, std::vector<double>& y,
            const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n), d(n);
  c[0] = m.off_upper[0] / m.diag[0];
  d[0] = rhs[0] / m.diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    double denom = m.diag[i] - m.off_lower[i] * c[i - 1];
    c[i] = (i + 1 < n) ? m.off_upper[i] / denom : 0.0;
    d[i] = (rhs[i] - m.off_lower[i] * d[i - 1]) / denom;
  }
  y.resize(n);
  y[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) y[i] = d[i] - c[i] * y[i + 1];
}

}  // namespace

void TridiagObstacle::solve(std::vector<double>& y, const std::vector<double>& rhs,
                            const std::vector<double>* upper, double tol_inner,
                            int max_inner, double omega,
                            double obstacle_scale) const {
  if (!upper && f->is_zero() && y.size() > 1) {
    thomas(*this, y, rhs);
    return;
  }
  if (omega <= 0.0) omega = auto_omega();
  double max_diag = *std::max_element(diag.begin(), diag.end());
  double rhs_max = 0.0;
  for (double r : rhs) rhs_max = std::max(rhs_max, std::abs(r));
  const double eps = std::numeric_limits<double>::epsilon();
  for (int k = 0; k < max_inner; ++k) {
    double diff = sweep(y, rhs, upper, omega);
    if (diff <= tol_inner) {
      double y_max = 0.0;
      for (double v : y) y_max = std::max(y_max, std::abs(v));
      double floor = 64.0 * eps * (max_diag * std::max(1.0, y_max) + rhs_max);
      double res = residual(y, rhs, upper, obstacle_scale);
      if (res <= tol_inner + floor) return;
    }
  }
  GridFunction last;
  last.values = y;
  last.weights.assign(y.size(), 1.0);
  throw SolverFailure("projected SOR did not converge within max_inner sweeps",
                      std::move(last), residual(y, rhs, upper, obstacle_scale));
}

}  // namespace detail

namespace {

detail::TridiagObstacle dirichlet_matrix(const EllipticOperator& op) {
  const int n = op.domain.n_interior;
  const double h = op.domain.h();
  const double a = 1.0 / (h * h);
  detail::TridiagObstacle m;
  m.diag.assign(n, 2.0 * a);
  m.off_lower.assign(n, -a);
  m.off_upper.assign(n, -a);
  m.off_lower[0] = 0.0;
  m.off_upper[n - 1] = 0.0;
  m.f = &op.f;
  return m;
}

}  // namespace

GridFunction solve_obstacle(const EllipticOperator& op, const ExtendedObstacle& p,
                            const GridFunction& u, const Tolerances& tol) {
  const int n = op.domain.n_interior;
  if (static_cast<int>(u.size()) != n)
    throw std::invalid_argument("solve_obstacle: u does not match the domain");
  for (double v : u.values)
    if (v < -tol.tol_order)
      throw std::invalid_argument("solve_obstacle: u must be nonnegative");
  if (!p.is_top() && static_cast<int>(p.finite_value().size()) != n)
    throw std::invalid_argument("solve_obstacle: obstacle does not match the domain");

  auto m = dirichlet_matrix(op);
  GridFunction y = GridFunction::constant(op.domain, 0.0);
  const std::vector<double>* upper = p.is_top() ? nullptr : &p.finite_value().values;
  m.solve(y.values, u.values, upper, tol.tol_inner, tol.max_inner, 0.0,
          1.0 / op.domain.h());
  return y;
}

double solve_scalar_obstacle(const ExtendedObstacle& p, double u) {
  if (u < 0.0)
    throw std::invalid_argument("solve_scalar_obstacle: u must be nonnegative");
  if (p.is_top()) return u;
  return std::min(p.finite_value().values.at(0), u);
}

double residual_vi(const EllipticOperator& op, const GridFunction& y,
                   const ExtendedObstacle& p, const GridFunction& u) {
  require_same_space(y, u, "residual_vi");
  auto m = dirichlet_matrix(op);
  const std::vector<double>* upper = p.is_top() ? nullptr : &p.finite_value().values;
  return m.residual(y.values, u.values, upper, 1.0 / op.domain.h());
}

double pgs_sweeps(const EllipticOperator& op, const ExtendedObstacle& p,
                  const GridFunction& u, GridFunction& y, int n_sweeps) {
  auto m = dirichlet_matrix(op);
  const std::vector<double>* upper = p.is_top() ? nullptr : &p.finite_value().values;
  double diff = 0.0;
  for (int k = 0; k < n_sweeps; ++k) diff = m.sweep(y.values, u.values, upper, 1.0);
  return diff;
}

}  // namespace qvi
