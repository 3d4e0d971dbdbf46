#include "pharmap/curvature.hpp"

#include <cmath>
#include <stdexcept>

#include "pharmap/numerics.hpp"

namespace pharmap {

ScalarField det_hessian(const ScalarJet& jet) {
  ScalarField out(jet.grid);
  const std::size_t n = jet.grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k)
      if (jet.defined[k])
        out.values()[k] = jet.uxx[k] * jet.uyy[k] - jet.uxy[k] * jet.uxy[k];
  });
  return out;
}

ScalarField det_hessian(const ScalarField& u) { return det_hessian(stencil_jet(u)); }

ScalarField det_hessian_complex(const ComplexJet& jet) {
  ScalarField out(jet.grid);
  for (std::size_t k = 0; k < jet.grid->size(); ++k)
    if (jet.defined[k])
      out.values()[k] = 4 * (std::norm(jet.fzb[k]) - std::norm(jet.fz[k]));
  return out;
}

ScalarField gauss_curvature(const ScalarJet& jet) {
  ScalarField out(jet.grid);
  for (std::size_t k = 0; k < jet.grid->size(); ++k) {
    if (!jet.defined[k]) continue;
    const double det = jet.uxx[k] * jet.uyy[k] - jet.uxy[k] * jet.uxy[k];
    const double m = 1 + jet.ux[k] * jet.ux[k] + jet.uy[k] * jet.uy[k];
    out.values()[k] = det / (m * m);
  }
  return out;
}

ScalarField gauss_curvature(const ScalarField& u) { return gauss_curvature(stencil_jet(u)); }

ScalarField curvature_k(const ScalarJet& jet, double p, KMode mode, double grad_tol) {
  if (mode == KMode::PLaplacianSplit || mode == KMode::PHarmonicScalar) {
    if (p == 2.0) throw std::invalid_argument("curvature_k: this mode requires p != 2");
  }
  ScalarField out(jet.grid);
  const std::size_t n = jet.grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!jet.defined[k]) continue;
      const double ux = jet.ux[k], uy = jet.uy[k];
      const double uxx = jet.uxx[k], uxy = jet.uxy[k], uyy = jet.uyy[k];
      const double m2 = ux * ux + uy * uy;
      const double m = std::sqrt(m2);
      if (m <= grad_tol) continue;
      const double lap = uxx + uyy;
      // <grad|grad u|, grad u/|grad u|> = (grad u)^T H (grad u) / |grad u|^2
      const double ghg = (ux * (uxx * ux + uxy * uy) + uy * (uxy * ux + uyy * uy)) / m2;
      double v = kNaN;
      switch (mode) {
        case KMode::Divergence:
          v = -(uy * uy * uxx - 2 * ux * uy * uxy + ux * ux * uyy) / (m2 * m);
          break;
        case KMode::GradientSplit:
          v = -lap / m + ghg / m;
          break;
        case KMode::PLaplacianSplit: {
          const double quad = ux * ux * uxx + 2 * ux * uy * uxy + uy * uy * uyy;
          const double lap_p = std::pow(m, p - 4) * (m2 * lap + (p - 2) * quad);
          v = -(p - 1) / (p - 2) * lap / m + lap_p / ((p - 2) * std::pow(m, p - 1));
          break;
        }
        case KMode::Complex: {
          const cplx f = 0.5 * cplx(ux, -uy);
          const cplx fz = 0.25 * cplx(uxx - uyy, -2 * uxy);
          const cplx fzb = 0.25 * cplx(lap, 0);
          const cplx expr = -2.0 * fzb + (f / std::conj(f)) * std::conj(fz) +
                            (std::conj(f) / f) * fz;
          v = expr.real() / (2 * std::abs(f));
          break;
        }
        case KMode::ComplexLog: {
          const cplx f = 0.5 * cplx(ux, -uy);
          const cplx fz = 0.25 * cplx(uxx - uyy, -2 * uxy);
          const cplx fzb = 0.25 * cplx(lap, 0);
          const cplx ln_z = fz / f + fzb / std::conj(f);  // (ln|f|^2)_z
          const cplx expr = -2.0 * ln_z * std::conj(f) + (f / std::conj(f)) * std::conj(fz) +
                            3.0 * (std::conj(f) / f) * fz;
          v = expr.real() / (2 * std::abs(f));
          break;
        }
        case KMode::PHarmonicScalar:
          v = -(p - 1) / (p - 2) * lap / m;
          break;
      }
      out.values()[k] = v;
    }
  });
  return out;
}

ScalarField curvature_k(const ScalarField& u, double p, KMode mode, double grad_tol) {
  return curvature_k(stencil_jet(u), p, mode, grad_tol);
}

ScalarField curvature_h(const ScalarJet& jet, double grad_tol) {
  ScalarField out(jet.grid);
  for (std::size_t k = 0; k < jet.grid->size(); ++k) {
    if (!jet.defined[k]) continue;
    const double ux = jet.ux[k], uy = jet.uy[k];
    const double m2 = ux * ux + uy * uy, m = std::sqrt(m2);
    if (m <= grad_tol) continue;
    out.values()[k] =
        ((jet.uxx[k] - jet.uyy[k]) * ux * uy - jet.uxy[k] * (ux * ux - uy * uy)) / (m2 * m);
  }
  return out;
}

ScalarField curvature_h(const ScalarField& u, double grad_tol) {
  return curvature_h(stencil_jet(u), grad_tol);
}

ComplexField phi_field(const ScalarJet& jet, double grad_tol) {
  ComplexField out(jet.grid);
  for (std::size_t k = 0; k < jet.grid->size(); ++k) {
    if (!jet.defined[k]) continue;
    const cplx f = 0.5 * cplx(jet.ux[k], -jet.uy[k]);
    const double af = std::abs(f);
    if (2 * af <= grad_tol) continue;
    const cplx fz = 0.25 * cplx(jet.uxx[k] - jet.uyy[k], -2 * jet.uxy[k]);
    const cplx fzb = 0.25 * cplx(jet.uxx[k] + jet.uyy[k], 0);
    out.values()[k] = ((std::conj(f) / f) * fz - fzb) / af;
  }
  return out;
}

PhiIdentityReport phi_identity_check(const ComplexJet& fj, const ComplexJet& gj, double p,
                                     double singular_tol) {
  PhiIdentityReport rep;
  rep.constant = lemma_constant(p);
  const std::size_t n = fj.grid->size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!fj.defined[k] || !gj.defined[k]) continue;
    const cplx f = fj.f[k], g = gj.f[k];
    if (std::abs(f) <= singular_tol || std::abs(g) <= singular_tol) continue;
    const cplx fz = fj.fz[k], gz = gj.fz[k];
    const cplx fb = std::conj(f), gb = std::conj(g);
    ++rep.nodes;

    const CoeffEntry ce = coefficient_entry(f, g, p);
    const cplx phi_f = (fb / f) * fz - fj.fzb[k];  // phi_{u1} |f|
    const cplx phi_g = (gb / g) * gz - gj.fzb[k];
    const cplx lin_f = ce.a11 * fz + ce.a12 * gz;
    const cplx lin_g = ce.a21 * fz + ce.a22 * gz;
    const cplx rhs_f = (fb / f) * fz - (lin_f + std::conj(lin_f));
    const cplx rhs_g = (gb / g) * gz - (lin_g + std::conj(lin_g));
    rep.max_eq_violation_f = std::max(rep.max_eq_violation_f, std::abs(phi_f - rhs_f));
    rep.max_eq_violation_g = std::max(rep.max_eq_violation_g, std::abs(phi_g - rhs_g));

    const double bound = rep.constant * (std::abs(fz) + std::abs(gz));
    rep.max_ineq_violation_f = std::max(rep.max_ineq_violation_f, std::abs(phi_f) - bound);
    rep.max_ineq_violation_g = std::max(rep.max_ineq_violation_g, std::abs(phi_g) - bound);
  }
  return rep;
}

}  // namespace pharmap
