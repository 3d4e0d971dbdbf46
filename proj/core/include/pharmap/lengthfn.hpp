#pragma once

#include <optional>
#include <vector>

#include "pharmap/field.hpp"
#include "pharmap/levelcurve.hpp"

namespace pharmap {

/// L(s), L'(s), L''(s) per sampled level, each two ways: line integrals of
/// the derivative representations (primary) and centered differences of L(s)
/// (cross-check). With a map context, L'' uses the vectorial form
///   L'' = int (A_u + B_u + C_u)/|grad u1|^4 dH^1
/// (second derivatives only); without it, the scalar form
///   L'' = int [div(grad v lap v/|grad v|^3) + lap(1/|grad v|)] dH^1/|grad v|
/// is built by differencing derived node fields.
struct LengthFunction {
  std::vector<double> s;
  std::vector<double> L, Lp_int, Lp_fd, Lpp_int, Lpp_fd, E_term;
  std::vector<std::uint8_t> valid;
};

LengthFunction length_function(const ScalarField& u, const ScalarJet& jet, double p,
                               const std::vector<double>& s_samples,
                               const MapJets* map_context = nullptr, double grad_tol = 1e-8);
LengthFunction length_function(const ScalarField& u, double p,
                               const std::vector<double>& s_samples,
                               const PlanarMap* map_context = nullptr, double grad_tol = 1e-8);

void write_length_csv(const std::string& path, const LengthFunction& lf);

/// Node fields of the vectorial second-derivative integrand pieces:
/// a = A_u, b = B_u, c = C_u, e = E_u, all divided by |grad u1|^4.
struct LppIntegrands {
  ScalarField abc, e;
};
LppIntegrands lpp_vectorial_integrands(const MapJets& jets, double p, double grad_tol = 1e-8);

/// The two gradient integrands of the isoperimetric inequality:
///   |grad|grad u1||^2 / |grad u1|^4  and  |grad|grad u2|^2|^2 / |grad u1|^6.
struct IsoIntegrands {
  ScalarField i1, i2;
};
IsoIntegrands iso_gradient_integrands(const MapJets& jets, double grad_tol = 1e-8);

struct LengthBoundReport {
  double length = 0;        // L(s) inside the ball
  double k_integral = 0;    // int_{Omega cap B} |k|
  double two_pi_r = 0;
  double slack = 0;         // k_integral + 2 pi R - length
  bool holds = false;
  bool level_ok = false;    // no singular nodes on the level inside B
};

/// Length estimate L(s) <= int_{Omega cap B}|k| + 2 pi R for the level s of
/// u inside the ball B((cx,cy), R). Node quadrature with ball-coverage
/// weights; the singular-node premise is verified, not assumed.
LengthBoundReport length_bound_check(const ScalarField& u, const ScalarJet& jet, double cx,
                                     double cy, double R, double s, double grad_tol = 1e-8);

/// Quadrature weight of a node restricted to the ball: mask weight times the
/// sampled coverage fraction of the node's dual cell.
double ball_node_weight(const Grid2D& g, int i, int j, double cx, double cy, double R);

}  // namespace pharmap
