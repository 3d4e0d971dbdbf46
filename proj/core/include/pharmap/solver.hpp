#pragma once

#include <utility>
#include <vector>

#include "pharmap/field.hpp"

namespace pharmap {

enum class SolveMethod { GradientDescent, DampedNewton };

struct SolveOptions {
  SolveMethod method = SolveMethod::GradientDescent;
  int max_iters = 2000;        // per continuation stage
  double grad_tol = 1e-8;      // sup-norm of the energy gradient density
  double epsilon_reg = 1e-8;   // final regularization of |Du| near 0
  double ls_shrink = 0.5;      // backtracking factor
  double ls_c1 = 1e-4;         // sufficient-decrease constant
  bool continuation = true;    // eps schedule 1e-2 -> 1e-4 -> epsilon_reg
};

struct SolveReport {
  int iterations = 0;
  double energy = 0;
  double grad_norm = 0;
  double residual_u1 = 0, residual_u2 = 0;  // RMS of the divergence-form residual
  bool converged = false;
  // accepted objective values as (stage, energy), non-increasing within a stage
  std::vector<std::pair<int, double>> energy_history;
  // per-step energy decreases from compensated cell sums; strictly positive
  std::vector<double> accepted_decreases;
};

/// Regularized p-energy of the map: trapezoid-weighted node sum of
/// (|Du|^2 + eps^2)^{p/2} with |Du|^2 from the difference stencils.
double energy(const PlanarMap& u, double epsilon_reg = 0.0);

/// Minimize the discrete regularized p-energy with Dirichlet data taken from
/// the boundary nodes of `boundary`. Interior nodes are initialized by
/// interpolating boundary values along grid lines. Non-convergence is
/// reported, not thrown.
PlanarMap solve_dirichlet(const PlanarMap& boundary, const SolveOptions& opts, SolveReport& report);

/// Divergence-form residual of the system, one field per component:
///   |Du|^{p-2} lap(u^i) + (p-2)/2 |Du|^{p-4} <grad u^i, grad |Du|^2>.
/// Nodes with |Du| below `singular_tol` (and p < 2) are NaN.
std::pair<ScalarField, ScalarField> residual_divergence(const MapJets& jets, double p,
                                                        double singular_tol = 1e-8);
std::pair<ScalarField, ScalarField> residual_divergence(const PlanarMap& u,
                                                        double singular_tol = 1e-8);

/// Residual of the expanded gradient representation
///   |grad u1|^{4-p} lap_p u1 + |grad u2|^2 lap u1 + (p-2)/2 <grad u1, grad |grad u2|^2>
/// (and symmetrically for u2), restricted to nodes where both gradients are
/// above `singular_tol`.
std::pair<ScalarField, ScalarField> residual_gradrep(const MapJets& jets, double p,
                                                     double singular_tol = 1e-8);

enum class PLaplaceForm { Real, Complex };

/// Scalar p-Laplacian from a derivative jet, either via the real divergence
/// expansion or via the complex-gradient form
///   2^{p-2}|f|^{p-2} (2p f_zbar + (p-2)(f/fbar conj(f_z) + fbar/f f_z)).
ScalarField scalar_p_laplacian(const ScalarJet& jet, double p,
                               PLaplaceForm form = PLaplaceForm::Real,
                               double singular_tol = 1e-8);
ScalarField scalar_p_laplacian(const ScalarField& v, double p,
                               PLaplaceForm form = PLaplaceForm::Real,
                               double singular_tol = 1e-8);

}  // namespace pharmap
