#include "qvi/lattice.hpp"

#include <algorithm>

namespace qvi {

void require_same_space(const GridFunction& a, const GridFunction& b,
                        const char* where) {
  if (!a.same_space(b))
    throw std::invalid_argument(std::string(where) + ": domain mismatch");
}

bool le(const GridFunction& a, const GridFunction& b, double tol) {
  require_same_space(a, b, "le");
  if (!(tol >= 0.0)) throw std::invalid_argument("le: tol must be nonnegative");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a.values[i] <= b.values[i] + tol)) return false;
  return true;
}

double norm(const GridFunction& v, double q) {
  if (q == kInf) {
    double m = 0.0;
    for (double x : v.values) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(q >= 1.0)) throw std::invalid_argument("norm: exponent must be >= 1 or infinity");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += v.weights[i] * std::pow(std::abs(v.values[i]), q);
  return std::pow(s, 1.0 / q);
}

GridFunction meet(const GridFunction& a, const GridFunction& b) {
  require_same_space(a, b, "meet");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    r.values[i] = std::min(a.values[i], b.values[i]);
  return r;
}

GridFunction join(const GridFunction& a, const GridFunction& b) {
  require_same_space(a, b, "join");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    r.values[i] = std::max(a.values[i], b.values[i]);
  return r;
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
  require_same_space(a, b, "add");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += b.values[i];
  return r;
}

GridFunction sub(const GridFunction& a, const GridFunction& b) {
  require_same_space(a, b, "sub");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] -= b.values[i];
  return r;
}

GridFunction scale(const GridFunction& a, double s) {
  GridFunction r = a;
  for (double& x : r.values) x *= s;
  return r;
}

GridFunction axpy(const GridFunction& a, double s, const GridFunction& b) {
  require_same_space(a, b, "axpy");
  GridFunction r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r.values[i] += s * b.values[i];
  return r;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  require_same_space(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

double min_value(const GridFunction& v) {
  return *std::min_element(v.values.begin(), v.values.end());
}

double max_value(const GridFunction& v) {
  return *std::max_element(v.values.begin(), v.values.end());
}

bool obstacle_le(const GridFunction& a, const ExtendedObstacle& p, double tol) {
  if (p.is_top()) return true;
  return le(a, p.finite_value(), tol);
}

}  // namespace qvi
