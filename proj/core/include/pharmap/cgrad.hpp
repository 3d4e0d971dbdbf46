#pragma once

#include <vector>

#include "pharmap/field.hpp"

namespace pharmap {

/// Per-node 2x2 complex coefficient matrix of the quasilinear first-order
/// system satisfied by the complex gradients (f, g) of a p-harmonic map:
///   [f g]^T_zbar = A(f,g) [f g]^T_z + conj(A(f,g)) conj([f g]^T_z).
/// Defined only where |f| and |g| clear the singular threshold.
struct CoeffMatrix {
  GridPtr grid;
  double p = 2;
  std::vector<cplx> a11, a12, a21, a22;
  std::vector<double> phi;  // determinant-like denominator, real and positive
  std::vector<double> bco;  // B = 2p + 4|f|^2/|g|^2
  std::vector<double> cco;  // C = 2 + 2 Re((gbar/g)(f/fbar)), in [0, 4]
  std::vector<cplx> dco;    // D = gbar/g + fbar/f
  std::vector<std::uint8_t> defined;

  explicit CoeffMatrix(GridPtr g);
  CoeffMatrix() = default;
};

CoeffMatrix coefficient_matrix(const ComplexField& f, const ComplexField& g, double p,
                               double singular_tol = 1e-8);
/// Single-node evaluation (used by the randomized bound certificate).
struct CoeffEntry {
  cplx a11, a12, a21, a22;
  double phi, B, C;
  cplx D;
};
CoeffEntry coefficient_entry(cplx f, cplx g, double p);

/// Piecewise p-only upper bound A_p for every entry of A(f,g):
///   (2-p)/(2p) on (1,2),  (p-2)/(2p) on [2,3],  (p-2)(p-1)/(4p) beyond 3.
double entry_bound(double p);

/// Constant of the curvature estimates |phi||f| <= C(p)(|f_z| + |g_z|):
/// C(p) = 1 + 2 A_p, i.e. 2/p, 2(p-1)/p, (p^2-p+2)/(2p) on the three ranges.
double lemma_constant(double p);

/// Residuals of the first-order system in both printed forms. The operator
/// form is f_zbar - (A11 f_z + A12 g_z + conj(A11 f_z + A12 g_z)); the raw
/// form keeps the (2p + 4|g|^2/|f|^2) prefactor and the g_zbar coupling.
/// They are related by an exact 2x2 linear map, checked in the tests.
struct SystemResidual {
  ComplexField op_f, op_g;    // operator-form residuals
  ComplexField raw_f, raw_g;  // raw Theorem-form residuals
};
SystemResidual system_residual(const ComplexJet& f, const ComplexJet& g, double p,
                               double singular_tol = 1e-8);
SystemResidual system_residual(const PlanarMap& u, double singular_tol = 1e-8);

/// |F_zbar| / |F_z| per node from difference stencils; NaN below threshold.
ScalarField beltrami_modulus(const ComplexField& F, double threshold = 1e-8);

struct QRReport {
  ScalarField mu_f, mu_g;        // per-node |f_zbar|/|f_z|, |g_zbar|/|g_z|
  ScalarField ratio_gz_fz;       // per-node |g_z|/|f_z|
  double p = 2;
  double a_bound = 0;           // entry_bound(p)
  double sup_mu_f = 0, sup_mu_g = 0;
  double sup_ratio_gz_fz = 0;   // sup |g_z|/|f_z|
  double sup_ratio_fz_gz = 0;
  double ratio_threshold = 0;         // derivable criterion (1-2Ap)/(2Ap)
  double ratio_threshold_printed = 0; // the looser printed constant (1-2Ap)/Ap
  double k_bound_f = 0, k_bound_g = 0;  // 2Ap (1 + sup ratio)
  bool quasiregular_f = false, quasiregular_g = false;
  double qr_coeff_max_violation = 0;  // max of |f_zbar| - 2Ap(|f_z|+|g_z|) over nodes
  std::size_t nodes = 0;
};

/// Node-wise verification of |f_zbar| <= 2 A_p (|f_z| + |g_z|) plus the
/// ratio criterion for quasiregularity of f and g. A report, not an assert.
QRReport quasiregularity_report(const ComplexJet& f, const ComplexJet& g, double p,
                                double singular_tol = 1e-8);

}  // namespace pharmap
