#include "pharmap/cgrad.hpp"

#include <cmath>
#include <stdexcept>

#include "pharmap/numerics.hpp"

namespace pharmap {

CoeffMatrix::CoeffMatrix(GridPtr g)
    : grid(std::move(g)),
      a11(grid->size()),
      a12(grid->size()),
      a21(grid->size()),
      a22(grid->size()),
      phi(grid->size(), kNaN),
      bco(grid->size(), kNaN),
      cco(grid->size(), kNaN),
      dco(grid->size()),
      defined(grid->size(), 0) {}

CoeffEntry coefficient_entry(cplx f, cplx g, double p) {
  CoeffEntry e;
  const double af2 = std::norm(f), ag2 = std::norm(g);
  const cplx fb = std::conj(f), gb = std::conj(g);
  const double Bf = 2 * p + 4 * ag2 / af2;  // prefactor of the f-equation
  const double Bg = 2 * p + 4 * af2 / ag2;  // = B in the printed coefficients
  const cplx w = (gb / g) * (f / fb);
  e.C = 2 + 2 * w.real();
  e.D = gb / g + fb / f;
  e.B = Bg;
  e.phi = Bf * Bg - (2 - p) * (2 - p) * e.C;
  const double s = (2 - p) / e.phi;
  const cplx core = e.B * (fb / f) + (2 - p) * e.D;
  e.a11 = s * core;
  e.a12 = s * (gb / fb) * core;
  const cplx core2 = (fb / (e.B * g)) * (e.phi + (2 - p) * (2 - p) * e.C);
  e.a21 = s * (core2 + (2 - p) * (fb / gb) * e.D);
  e.a22 = s * ((gb / (e.B * g)) * (e.phi + (2 - p) * (2 - p) * e.C) + (2 - p) * e.D);
  return e;
}

CoeffMatrix coefficient_matrix(const ComplexField& f, const ComplexField& g, double p,
                               double singular_tol) {
  if (f.grid_ptr() != g.grid_ptr())
    throw std::invalid_argument("coefficient_matrix: fields on different grids");
  CoeffMatrix m(f.grid_ptr());
  m.p = p;
  const std::size_t n = m.grid->size();
  const auto& mask = m.grid->mask();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (mask[k] != NodeState::Interior) continue;  // boundary stencils degrade the identities
      const cplx fv = f.values()[k], gv = g.values()[k];
      if (!std::isfinite(fv.real()) || !std::isfinite(gv.real())) continue;
      if (std::abs(fv) <= singular_tol || std::abs(gv) <= singular_tol) continue;
      const CoeffEntry ce = coefficient_entry(fv, gv, p);
      m.a11[k] = ce.a11;
      m.a12[k] = ce.a12;
      m.a21[k] = ce.a21;
      m.a22[k] = ce.a22;
      m.phi[k] = ce.phi;
      m.bco[k] = ce.B;
      m.cco[k] = ce.C;
      m.dco[k] = ce.D;
      m.defined[k] = 1;
    }
  });
  return m;
}

double entry_bound(double p) {
  if (!(p > 1)) throw std::invalid_argument("entry_bound: p must exceed 1");
  if (p < 2) return (2 - p) / (2 * p);
  if (p <= 3) return (p - 2) / (2 * p);
  return (p - 2) * (p - 1) / (4 * p);
}

double lemma_constant(double p) { return 1 + 2 * entry_bound(p); }

SystemResidual system_residual(const ComplexJet& fj, const ComplexJet& gj, double p,
                               double singular_tol) {
  SystemResidual res{ComplexField(fj.grid), ComplexField(fj.grid), ComplexField(fj.grid),
                     ComplexField(fj.grid)};
  const std::size_t n = fj.grid->size();
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      if (!fj.defined[k] || !gj.defined[k]) continue;
      const cplx f = fj.f[k], g = gj.f[k];
      if (std::abs(f) <= singular_tol || std::abs(g) <= singular_tol) continue;
      const cplx fz = fj.fz[k], gz = gj.fz[k];
      const cplx fzb = fj.fzb[k], gzb = gj.fzb[k];
      const cplx fb = std::conj(f), gb = std::conj(g);

      const CoeffEntry ce = coefficient_entry(f, g, p);
      const cplx lin_f = ce.a11 * fz + ce.a12 * gz;
      const cplx lin_g = ce.a21 * fz + ce.a22 * gz;
      res.op_f.values()[k] = fzb - (lin_f + std::conj(lin_f));
      res.op_g.values()[k] = gzb - (lin_g + std::conj(lin_g));

      const double Bf = 2 * p + 4 * std::norm(g) / std::norm(f);
      const double Bg = 2 * p + 4 * std::norm(f) / std::norm(g);
      res.raw_f.values()[k] =
          Bf * fzb -
          (2 - p) * ((fb / f) * fz + (f / fb) * std::conj(fz)) -
          (2 - p) * ((gb / f) * gz + (g / fb) * std::conj(gz) + (gb / fb + g / f) * gzb);
      res.raw_g.values()[k] =
          Bg * gzb -
          (2 - p) * ((gb / g) * gz + (g / gb) * std::conj(gz)) -
          (2 - p) * ((fb / g) * fz + (f / gb) * std::conj(fz) + (fb / gb + f / g) * fzb);
    }
  });
  return res;
}

SystemResidual system_residual(const PlanarMap& u, double singular_tol) {
  const MapJets jets = stencil_jets(u);
  return system_residual(complex_jet(jets.j1), complex_jet(jets.j2), u.p, singular_tol);
}

ScalarField beltrami_modulus(const ComplexField& F, double threshold) {
  auto [Fz, Fzb] = wirtinger(F);
  ScalarField out(F.grid_ptr());
  const std::size_t n = F.grid().size();
  for (std::size_t k = 0; k < n; ++k) {
    const double az = std::abs(Fz.values()[k]);
    if (!std::isfinite(az) || az <= threshold) continue;
    out.values()[k] = std::abs(Fzb.values()[k]) / az;
  }
  return out;
}

QRReport quasiregularity_report(const ComplexJet& fj, const ComplexJet& gj, double p,
                                double singular_tol) {
  QRReport rep;
  rep.mu_f = ScalarField(fj.grid);
  rep.mu_g = ScalarField(fj.grid);
  rep.ratio_gz_fz = ScalarField(fj.grid);
  rep.p = p;
  rep.a_bound = entry_bound(p);
  const double twoAp = 2 * rep.a_bound;
  const std::size_t n = fj.grid->size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!fj.defined[k] || !gj.defined[k]) continue;
    const double afz = std::abs(fj.fz[k]), agz = std::abs(gj.fz[k]);
    const double afzb = std::abs(fj.fzb[k]), agzb = std::abs(gj.fzb[k]);
    ++rep.nodes;
    rep.qr_coeff_max_violation =
        std::max(rep.qr_coeff_max_violation,
                 std::max(afzb - twoAp * (afz + agz), agzb - twoAp * (afz + agz)));
    if (afz > singular_tol) {
      rep.mu_f.values()[k] = afzb / afz;
      rep.ratio_gz_fz.values()[k] = agz / afz;
      rep.sup_mu_f = std::max(rep.sup_mu_f, afzb / afz);
      rep.sup_ratio_gz_fz = std::max(rep.sup_ratio_gz_fz, agz / afz);
    }
    if (agz > singular_tol) {
      rep.mu_g.values()[k] = agzb / agz;
      rep.sup_mu_g = std::max(rep.sup_mu_g, agzb / agz);
      rep.sup_ratio_fz_gz = std::max(rep.sup_ratio_fz_gz, afz / agz);
    }
  }
  const double inf = std::numeric_limits<double>::infinity();
  rep.ratio_threshold = twoAp > 0 ? (1 - twoAp) / twoAp : inf;
  rep.ratio_threshold_printed = rep.a_bound > 0 ? (1 - twoAp) / rep.a_bound : inf;
  rep.k_bound_f = twoAp * (1 + rep.sup_ratio_gz_fz);
  rep.k_bound_g = twoAp * (1 + rep.sup_ratio_fz_gz);
  rep.quasiregular_f = rep.sup_ratio_gz_fz < rep.ratio_threshold && rep.sup_mu_f < 1.0;
  rep.quasiregular_g = rep.sup_ratio_fz_gz < rep.ratio_threshold && rep.sup_mu_g < 1.0;
  return rep;
}

}  // namespace pharmap
