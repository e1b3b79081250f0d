#pragma once

#include <algorithm>

#include "qvi/lattice.hpp"
#include "qvi/parabolic.hpp"

namespace qvi {

// The three scalar obstacle maps.  A and B are the two one-dimensional
// counterexample variants; C is a concave piecewise-linear map with
// C(0) = 1 > 0, concave on [-2, inf).
enum class ScalarPhiVariant { A, B, C };

// Templated so the scalar fixed-point solver can evaluate the map in
// extended precision.
template <class T>
T phi_scalar_t(T s, ScalarPhiVariant variant) {
  switch (variant) {
    case ScalarPhiVariant::A:
      if (s < T(0)) return T(0);
      if (s <= T(1)) return s;
      return T(2) - T(1) / s;
    case ScalarPhiVariant::B:
      if (s < T(1)) return T(1);
      if (s <= T(2)) return s;
      return T(2);
    case ScalarPhiVariant::C: {
      T v = T(1) + s / T(2);
      if (v < T(0)) return T(0);
      if (v > T(2)) return T(2);
      return v;
    }
  }
  return T(0);
}

inline double phi_scalar(double s, ScalarPhiVariant variant) {
  return phi_scalar_t<double>(s, variant);
}

// One-sided directional derivative of the scalar map at s in direction z.
double phi_scalar_derivative(double s, double z, ScalarPhiVariant variant);

// Impulse-control data: switching cost kappa and sampled movement cost
// c0 at grid shifts xi_j = j*h.
struct ImpulseConfig {
  double kappa = 1.0;
  std::vector<double> c0;  // one entry per shift index, 0-based

  static ImpulseConfig zero_cost(double kappa, int n_shifts) {
    ImpulseConfig c;
    c.kappa = kappa;
    c.c0.assign(n_shifts, 0.0);
    return c;
  }

  void validate(int n_interior) const {
    if (!(kappa >= 0.0)) throw std::invalid_argument("ImpulseConfig: kappa must be >= 0");
    if (static_cast<int>(c0.size()) < n_interior)
      throw std::invalid_argument("ImpulseConfig: c0 table shorter than the grid");
    for (double v : c0)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("ImpulseConfig: c0 entries must be nonnegative and finite");
  }

  bool zero_c0() const {
    return std::all_of(c0.begin(), c0.end(), [](double v) { return v == 0.0; });
  }
};

// Theta(y)_i = kappa + min over shifts j >= 0 with node i+j interior of
// (c0_j + y_{i+j}).  Requires y >= -kappa (up to tol slack).
GridFunction theta_impulse(const GridFunction& y, const ImpulseConfig& cfg,
                           double tol = 1e-10);
// Serial reference for the parallel kernel; must agree bit-for-bit.
GridFunction theta_impulse_serial(const GridFunction& y, const ImpulseConfig& cfg,
                                  double tol = 1e-10);
// O(n) suffix-minimum fast path, valid only for c0 == 0; bit-for-bit
// identical to the brute-force kernels.
GridFunction theta_impulse_suffix(const GridFunction& y, const ImpulseConfig& cfg,
                                  double tol = 1e-10);

// Lemma-style truncation v -> Theta(max(-kappa, v)); total on all inputs.
GridFunction phi_truncated_impulse(const GridFunction& v, const ImpulseConfig& cfg);

// Bounded nondecreasing source nonlinearity for the heat map:
// g_eps(s) = min(max(s + eps, 0), 1) / (1 + eps), concave on [-eps, inf);
// eps = 0 gives the default g(s) = min(max(s, 0), 1).
struct HeatNonlinearity {
  double eps = 0.0;
  double operator()(double s) const {
    return std::min(std::max(s + eps, 0.0), 1.0) / (1.0 + eps);
  }
  double derivative(double s, double z) const;
};

// Heat-equation obstacle map: final slice w(T) of the Dirichlet heat solve
// with source g(y), extended by its zero boundary values onto the Neumann
// spatial grid.  y lives on the Neumann grid.
GridFunction phi_heat(const SpaceTimeFunction& y, const HeatNonlinearity& g,
                      const SpaceTimeGrid& grid);

}  // namespace qvi
