#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qvi {

// Uniform 1-D grid on (0, length) with homogeneous Dirichlet nodes
// eliminated.  The singleton flag realizes the 0-D case (one node,
// quadrature weight 1).
struct Domain1D {
  int n_interior = 1;
  double length = 1.0;
  bool singleton = false;

  Domain1D() = default;
  Domain1D(int n, double len) : n_interior(n), length(len) {
    if (n <= 0) throw std::invalid_argument("Domain1D: n_interior must be positive");
    if (!(len > 0.0)) throw std::invalid_argument("Domain1D: length must be positive");
  }

  static Domain1D scalar() {
    Domain1D d;
    d.n_interior = 1;
    d.length = 1.0;
    d.singleton = true;
    return d;
  }

  double h() const { return singleton ? 1.0 : length / (n_interior + 1); }
  double x(int i) const { return singleton ? 0.0 : (i + 1) * h(); }

  bool operator==(const Domain1D&) const = default;
};

// Node values of a function on a discretized domain, with quadrature
// weights.  Weighted sums realize the discrete L^q norms.
struct GridFunction {
  std::vector<double> values;
  std::vector<double> weights;

  GridFunction() = default;
  GridFunction(std::vector<double> v, std::vector<double> w)
      : values(std::move(v)), weights(std::move(w)) {
    if (values.size() != weights.size())
      throw std::invalid_argument("GridFunction: values/weights length mismatch");
  }

  static GridFunction constant(const Domain1D& d, double c) {
    GridFunction g;
    g.values.assign(d.n_interior, c);
    g.weights.assign(d.n_interior, d.h());
    return g;
  }

  static GridFunction zeros_like(const GridFunction& other) {
    GridFunction g;
    g.values.assign(other.size(), 0.0);
    g.weights = other.weights;
    return g;
  }

  static GridFunction scalar(double v) {
    return GridFunction{{v}, {1.0}};
  }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  bool same_space(const GridFunction& other) const {
    return values.size() == other.values.size() && weights == other.weights;
  }
};

void require_same_space(const GridFunction& a, const GridFunction& b,
                        const char* where);

// Pointwise partial order with slack: a <= b + tol at every node.
bool le(const GridFunction& a, const GridFunction& b, double tol);

// Weighted discrete L^q norm; q = infinity gives the max norm.
double norm(const GridFunction& v, double q);

constexpr double kInf = std::numeric_limits<double>::infinity();

GridFunction meet(const GridFunction& a, const GridFunction& b);
GridFunction join(const GridFunction& a, const GridFunction& b);

// Elementwise helpers used throughout the solvers.
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction sub(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& a, double s);
// a + s * b
GridFunction axpy(const GridFunction& a, double s, const GridFunction& b);
double max_abs_diff(const GridFunction& a, const GridFunction& b);
double min_value(const GridFunction& v);
double max_value(const GridFunction& v);

// Finite obstacle (nonnegative grid function) or the top element p-bar.
class ExtendedObstacle {
 public:
  static ExtendedObstacle top() { return ExtendedObstacle(); }
  static ExtendedObstacle finite(GridFunction g) {
    for (double v : g.values)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("ExtendedObstacle: finite obstacle must be nonnegative");
    ExtendedObstacle o;
    o.value_ = std::move(g);
    return o;
  }

  bool is_top() const { return !value_.has_value(); }
  const GridFunction& finite_value() const {
    if (is_top()) throw std::logic_error("ExtendedObstacle: top has no finite value");
    return *value_;
  }

 private:
  ExtendedObstacle() = default;
  std::optional<GridFunction> value_;
};

// Always true for the top element; defers to le for finite obstacles.
bool obstacle_le(const GridFunction& a, const ExtendedObstacle& p, double tol);

struct Tolerances {
  double tol_order = 1e-10;
  double tol_fixed_point = 1e-8;
  double tol_inner = 1e-10;
  int max_outer = 10000;
  int max_inner = 2000000;

  void validate() const {
    if (!(tol_order >= 0.0)) throw std::invalid_argument("tol_order must be >= 0");
    if (!(tol_inner > 0.0 && tol_fixed_point > 0.0))
      throw std::invalid_argument("tolerances must be positive");
    if (!(tol_inner <= tol_fixed_point && tol_fixed_point <= 1.0))
      throw std::invalid_argument("require tol_inner <= tol_fixed_point <= 1");
    if (max_outer <= 0 || max_inner <= 0)
      throw std::invalid_argument("iteration limits must be positive");
  }
};

}  // namespace qvi
