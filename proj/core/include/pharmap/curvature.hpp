#pragma once

#include <string>
#include <vector>

#include "pharmap/cgrad.hpp"
#include "pharmap/field.hpp"

namespace pharmap {

/// det H(u) = uxx uyy - uxy^2; the complex route 4(|f_zbar|^2 - |f_z|^2)
/// is algebraically identical on a shared jet and checked in the tests.
ScalarField det_hessian(const ScalarJet& jet);
ScalarField det_hessian(const ScalarField& u);
ScalarField det_hessian_complex(const ComplexJet& jet);

/// Gauss curvature of the graph z = u(x,y): det H(u) / (1 + |grad u|^2)^2.
ScalarField gauss_curvature(const ScalarJet& jet);
ScalarField gauss_curvature(const ScalarField& u);

/// Evaluation routes for the level-curve curvature k = -div(grad u/|grad u|).
/// All are algebraic identities on a C^2 jet and must agree where defined;
/// PHarmonicScalar additionally assumes lap_p u = 0.
enum class KMode {
  Divergence,        // -((uy)^2 uxx - 2 ux uy uxy + (ux)^2 uyy)/|grad u|^3
  GradientSplit,     // -lap u/|grad u| + <grad|grad u|, grad u/|grad u|>/|grad u|
  PLaplacianSplit,   // -(p-1)/(p-2) lap u/|grad u| + lap_p u/((p-2)|grad u|^{p-1}), p != 2
  Complex,           // 2|f| k = -2 f_zbar + f/fbar conj(f_z) + fbar/f f_z
  ComplexLog,        // 2|f| k = -2 (ln|f|^2)_z + f/fbar conj(f_z) + 3 fbar/f f_z
  PHarmonicScalar,   // -(p-1)/(p-2) lap u/|grad u|, scalar p-harmonic case
};

ScalarField curvature_k(const ScalarJet& jet, double p, KMode mode, double grad_tol = 1e-8);
ScalarField curvature_k(const ScalarField& u, double p, KMode mode, double grad_tol = 1e-8);

/// Curvature of the steepest-descent lines:
///   h = ((uxx - uyy) ux uy - uxy((ux)^2 - (uy)^2)) / |grad u|^3.
ScalarField curvature_h(const ScalarJet& jet, double grad_tol = 1e-8);
ScalarField curvature_h(const ScalarField& u, double grad_tol = 1e-8);

/// phi = k + i h = -2 d/dz (fbar/|f|), evaluated algebraically from the jet:
/// phi |f| = (fbar/f) f_z - f_zbar. fbar/|f| is invariant under rescaling f,
/// so the f = (u_x - i u_y)/2 convention used throughout applies here too.
ComplexField phi_field(const ScalarJet& jet, double grad_tol = 1e-8);

struct PhiIdentityReport {
  // max |lhs - rhs| of phi|f| = (fbar/f - A11)f_z - A12 g_z - conj(A11 f_z + A12 g_z)
  double max_eq_violation_f = 0, max_eq_violation_g = 0;
  // max of |phi||f| - C(p)(|f_z|+|g_z|) (positive would violate the bound)
  double max_ineq_violation_f = 0, max_ineq_violation_g = 0;
  double constant = 0;  // C(p)
  std::size_t nodes = 0;
};

/// Both sides of the phi representation through A(f,g) and the derived
/// inequality |phi_{u1}||f| <= C(p)(|f_z| + |g_z|), node-wise.
PhiIdentityReport phi_identity_check(const ComplexJet& f, const ComplexJet& g, double p,
                                     double singular_tol = 1e-8);

}  // namespace pharmap
