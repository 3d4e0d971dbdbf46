#include "pharmap/families.hpp"

#include <cmath>

#include "pharmap/errors.hpp"

namespace pharmap {

AnalyticScalar analytic_constant(double c) {
  return {[c](double, double) { return c; },
          [](double, double) { return std::array<double, 5>{0, 0, 0, 0, 0}; }};
}

AnalyticScalar analytic_affine(double a, double b, double c) {
  return {[a, b, c](double x, double y) { return a * x + b * y + c; },
          [a, b](double, double) { return std::array<double, 5>{a, b, 0, 0, 0}; }};
}

AnalyticScalar analytic_quadratic(const std::array<double, 6>& k) {
  return {[k](double x, double y) {
            return k[0] + k[1] * x + k[2] * y + k[3] * x * x + k[4] * x * y + k[5] * y * y;
          },
          [k](double x, double y) {
            return std::array<double, 5>{k[1] + 2 * k[3] * x + k[4] * y,
                                         k[2] + k[4] * x + 2 * k[5] * y, 2 * k[3], k[4], 2 * k[5]};
          }};
}

AnalyticScalar analytic_radial_square() { return analytic_quadratic({0, 0, 0, 1, 0, 1}); }

AnalyticScalar analytic_from_radial_scalar(const RadialScalar& rs) {
  return {[rs](double x, double y) { return rs.value(x, y); },
          [rs](double x, double y) { return rs.jet(x, y); }};
}

AnalyticScalar analytic_ramp_r(double a, double b) {
  const double s = 1.0 / (b - a);
  return {[a, s](double x, double y) { return (std::hypot(x, y) - a) * s; },
          [s](double x, double y) {
            const double r2 = x * x + y * y, r = std::sqrt(r2), r3 = r2 * r;
            return std::array<double, 5>{s * x / r, s * y / r, s * y * y / r3, -s * x * y / r3,
                                         s * x * x / r3};
          }};
}

AnalyticScalar analytic_sin_cos() {
  return {[](double x, double y) { return std::sin(x) * std::cos(y); },
          [](double x, double y) {
            return std::array<double, 5>{std::cos(x) * std::cos(y), -std::sin(x) * std::sin(y),
                                         -std::sin(x) * std::cos(y), -std::cos(x) * std::sin(y),
                                         -std::sin(x) * std::cos(y)};
          }};
}

AnalyticMap map_identity() { return {analytic_affine(1, 0, 0), analytic_affine(0, 1, 0)}; }

AnalyticMap map_affine(const std::array<double, 6>& c1, const std::array<double, 6>& c2) {
  return {analytic_quadratic({c1[0], c1[1], c1[2], 0, 0, 0}),
          analytic_quadratic({c2[0], c2[1], c2[2], 0, 0, 0})};
}

AnalyticMap map_harmonic_quad(double scale) {
  return {analytic_quadratic({0, 0, 0, scale, 0, -scale}),
          analytic_quadratic({0, 0, 0, 0, 2 * scale, 0})};
}

AnalyticMap map_scalar(const AnalyticScalar& u1) { return {u1, analytic_constant(0)}; }
AnalyticMap map_duplicated(const AnalyticScalar& u) { return {u, u}; }

AnalyticMap map_radial(const RadialProfile& prof) {
  AnalyticMap m;
  m.u1 = {[prof](double x, double y) { return eval_profile(prof, std::hypot(x, y)).H * x; },
          [prof](double x, double y) { return radial_map_jet_u1(prof, x, y); }};
  m.u2 = {[prof](double x, double y) { return eval_profile(prof, std::hypot(x, y)).H * y; },
          [prof](double x, double y) { return radial_map_jet_u2(prof, x, y); }};
  return m;
}

ScalarField sample(const AnalyticScalar& f, const GridPtr& grid) {
  ScalarField out(grid);
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i)
      if (grid->in(i, j)) out.at(i, j) = f.value(grid->x(i), grid->y(j));
  return out;
}

ScalarJet analytic_jet(const AnalyticScalar& f, const GridPtr& grid) {
  ScalarJet jet(grid);
  for (int j = 0; j < grid->ny(); ++j)
    for (int i = 0; i < grid->nx(); ++i) {
      if (!grid->in(i, j)) continue;
      const auto d = f.jet(grid->x(i), grid->y(j));
      const std::size_t k = grid->idx(i, j);
      jet.ux[k] = d[0];
      jet.uy[k] = d[1];
      jet.uxx[k] = d[2];
      jet.uxy[k] = d[3];
      jet.uyy[k] = d[4];
      jet.defined[k] = 1;
    }
  return jet;
}

PlanarMap sample_map(const AnalyticMap& m, const GridPtr& grid, double p) {
  return PlanarMap(sample(m.u1, grid), sample(m.u2, grid), p);
}

MapJets analytic_jets(const AnalyticMap& m, const GridPtr& grid) {
  return {analytic_jet(m.u1, grid), analytic_jet(m.u2, grid)};
}

AnalyticMap family_by_name(const std::string& name,
                           const std::function<double(const std::string&, double)>& param,
                           double p) {
  if (name == "identity") return map_identity();
  if (name == "affine")
    return map_affine({param("a1", 0), param("b1", 1), param("c1", 0)},
                      {param("a2", 0), param("b2", 0), param("c2", 1)});
  if (name == "harmonic-quad") return map_harmonic_quad(param("scale", 1.0));
  if (name == "scalar-radial") {
    auto rs = scalar_radial(p, param("c1", 1.0), param("c2", 0.0));
    auto u = analytic_from_radial_scalar(rs);
    return param("duplicate", 0.0) != 0.0 ? map_duplicated(u) : map_scalar(u);
  }
  if (name == "radial-profile") {
    auto prof = integrate_radial_auto(p, param("r0", 1.0), param("r1", 2.1), param("H0", 1.0),
                                      param("H0p", 0.4));
    return map_radial(prof);
  }
  if (name == "ramp-r") {
    AnalyticMap m;
    m.u1 = analytic_ramp_r(param("a", 1.0), param("b", 2.0));
    m.u2 = analytic_quadratic({param("q0", 0), param("q1", 1), param("q2", 0), param("q3", 0),
                               param("q4", 0.3), param("q5", 0)});
    return m;
  }
  if (name == "quadratic")
    return {analytic_quadratic({param("a0", 0), param("a1", 0), param("a2", 0), param("a3", 1),
                                param("a4", 0), param("a5", -1)}),
            analytic_quadratic({param("b0", 0), param("b1", 0), param("b2", 0), param("b3", 0),
                                param("b4", 2), param("b5", 0)})};
  throw ConfigError("boundary.family: unknown family '" + name + "'");
}

}  // namespace pharmap
