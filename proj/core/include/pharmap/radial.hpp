#pragma once

#include <functional>
#include <vector>

#include "pharmap/field.hpp"
#include "pharmap/grid.hpp"

namespace pharmap {

/// Sampled radial profile H(r) of the map u = (H(r)x, H(r)y).
struct RadialProfile {
  double p = 2.0;
  std::vector<double> r, H, Hp;   // strictly increasing r > 0
  std::vector<double> Hpp;        // from the governing ODE; used for Hermite evaluation

  double r_min() const { return r.front(); }
  double r_max() const { return r.back(); }
};

/// H'' solved from the radial reduction of the p-harmonic system,
///   (p-1)H''(H')^2 r^3 + (2p-1)(H')^3 r^2 + 2(p-1)H H' H'' r^2
///     + (5p-4)H(H')^2 r + p H^2 H'' r + 3p H^2 H' = 0.
/// Throws NumericalError when the H''-coefficient vanishes.
double radial_ode_h2(double r, double H, double Hp, double p);

/// Fixed-step classic RK4 for the radial ODE as an initial-value problem.
/// r1 < r0 integrates inward. step is the magnitude of the r-increment.
RadialProfile integrate_radial(double p, double r0, double r1, double H0, double Hp0, double step);

/// Step refinement until the Richardson estimate of the profile error is
/// below tol; returns the fine-step profile.
RadialProfile integrate_radial_auto(double p, double r0, double r1, double H0, double Hp0,
                                    double tol = 1e-8);

struct RadialEval {
  double H, Hp, Hpp;
};
/// Cubic Hermite evaluation between profile samples.
RadialEval eval_profile(const RadialProfile& prof, double r);

/// Exact scalar radial p-harmonic function c1 * rho(r) + c2 with
/// rho = r^((p-2)/(p-1)) for p != 2 and rho = ln r for p = 2, together with
/// its derivative jet. Valid away from r = 0.
struct RadialScalar {
  double p, c1, c2;
  double value(double x, double y) const;
  std::array<double, 5> jet(double x, double y) const;  // ux uy uxx uxy uyy
};
RadialScalar scalar_radial(double p, double c1, double c2);

struct CInterval {
  bool empty = true;
  double c_low = 0, c_high = 0;  // admissible c in (1, c_high]; c_low is the raw lower root
};
/// Aperture constants c > 1 for which the sign-reversal construction admits
/// solutions: the quadratic 4(1-p)c^2 - 4pc + p(p-4) >= 0 intersected with
/// c > 1. Nonempty exactly when p > 6 + 4*sqrt(2).
CInterval admissible_c_interval(double p);

struct CounterexampleSpec {
  double p, c;
  double t_minus, t_plus, t_star;  // roots and midpoint of (1+c(p-1))t^2 + (p-2)t + 1 + c <= 0
  double r0, H0, Hp0;
  double r_lo, r_hi;  // r-range on which t(r) stayed inside [t_minus, t_plus]
};

struct CounterexampleResult {
  CounterexampleSpec spec;
  RadialProfile profile;
  GridPtr sector;
  PlanarMap map;            // u = (Hx, Hy) sampled on the sector grid
  double min_det_h1 = 0;    // min over interior nodes, closed-form Hessian determinants
  double min_det_h2 = 0;
  double tol = 0;           // 10x the cross-check error scale
  bool both_nonnegative = false;
};

/// Radial map on a thin sector {y^2 < x^2 < c y^2} with both coordinate
/// Hessian determinants nonnegative; exists for p > 6+4*sqrt(2).
CounterexampleResult counterexample_map(double p, double c, int nx, int ny);

/// Closed-form derivative jets of u = (H(r)x, H(r)y) from a profile.
std::array<double, 5> radial_map_jet_u1(const RadialProfile& prof, double x, double y);
std::array<double, 5> radial_map_jet_u2(const RadialProfile& prof, double x, double y);

/// det H(u^i) of the radial map in closed form:
///   det H(u1) = H'H'' x^2/r + (H')^2 (2x^2 - y^2)/r^2   (u2: swap x and y).
double radial_det_h1(const RadialEval& e, double x, double y);
double radial_det_h2(const RadialEval& e, double x, double y);

/// Left side of the t-quadratic (1+c(p-1))t^2 + (p-2)t + 1 + c.
double t_quadratic(double p, double c, double t);

}  // namespace pharmap
