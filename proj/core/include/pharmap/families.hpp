#pragma once

#include <array>
#include <functional>
#include <string>

#include "pharmap/field.hpp"
#include "pharmap/radial.hpp"

namespace pharmap {

/// Analytic scalar function with its exact derivative jet. Families drive
/// boundary data, oracle tests, and the tight algebraic identity checks that
/// stencil error would otherwise mask.
struct AnalyticScalar {
  std::function<double(double, double)> value;
  std::function<std::array<double, 5>(double, double)> jet;  // ux uy uxx uxy uyy
};

struct AnalyticMap {
  AnalyticScalar u1, u2;
};

AnalyticScalar analytic_constant(double c);
AnalyticScalar analytic_affine(double a, double b, double c);          // a x + b y + c
AnalyticScalar analytic_quadratic(const std::array<double, 6>& k);     // k0 + k1 x + k2 y + k3 x^2 + k4 xy + k5 y^2
AnalyticScalar analytic_radial_square();                               // r^2
AnalyticScalar analytic_from_radial_scalar(const RadialScalar& rs);
AnalyticScalar analytic_ramp_r(double a, double b);                    // (r - a)/(b - a)
AnalyticScalar analytic_sin_cos();                                     // sin x cos y

AnalyticMap map_identity();
AnalyticMap map_affine(const std::array<double, 6>& c1, const std::array<double, 6>& c2);
AnalyticMap map_harmonic_quad(double scale);                  // (x^2 - y^2, 2xy) * scale
AnalyticMap map_scalar(const AnalyticScalar& u1);             // (u1, 0)
AnalyticMap map_duplicated(const AnalyticScalar& u);          // (u, u)
AnalyticMap map_radial(const RadialProfile& prof);            // (H(r)x, H(r)y)

ScalarField sample(const AnalyticScalar& f, const GridPtr& grid);
/// Jet defined at every masked-in node.
ScalarJet analytic_jet(const AnalyticScalar& f, const GridPtr& grid);
PlanarMap sample_map(const AnalyticMap& m, const GridPtr& grid, double p);
MapJets analytic_jets(const AnalyticMap& m, const GridPtr& grid);

/// Named families for config files: affine, harmonic-quad, scalar-radial,
/// radial-profile, ramp-r, quadratic. Throws ConfigError on unknown names or
/// missing parameters.
AnalyticMap family_by_name(const std::string& name,
                           const std::function<double(const std::string&, double)>& param,
                           double p);

}  // namespace pharmap
