#include "pharmap/lengthfn.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "pharmap/curvature.hpp"

namespace pharmap {

namespace {

struct JetAux {
  double m2, m;      // |grad u|^2, |grad u|
  double gx, gy;     // grad u
  double dgx, dgy;   // grad |grad u| = H grad u / |grad u|
  double lap;
};

bool jet_aux(const ScalarJet& j, std::size_t k, double grad_tol, JetAux& a) {
  if (!j.defined[k]) return false;
  a.gx = j.ux[k];
  a.gy = j.uy[k];
  a.m2 = a.gx * a.gx + a.gy * a.gy;
  a.m = std::sqrt(a.m2);
  if (a.m <= grad_tol) return false;
  a.dgx = (j.uxx[k] * a.gx + j.uxy[k] * a.gy) / a.m;
  a.dgy = (j.uxy[k] * a.gx + j.uyy[k] * a.gy) / a.m;
  a.lap = j.uxx[k] + j.uyy[k];
  return true;
}

}  // namespace

LppIntegrands lpp_vectorial_integrands(const MapJets& jets, double p, double grad_tol) {
  LppIntegrands out{ScalarField(jets.j1.grid), ScalarField(jets.j1.grid)};
  const std::size_t n = jets.j1.grid->size();
  for (std::size_t k = 0; k < n; ++k) {
    JetAux a1;
    if (!jet_aux(jets.j1, k, grad_tol, a1)) continue;
    if (!jets.j2.defined[k]) continue;
    const ScalarJet& j2 = jets.j2;
    const double g2x = j2.ux[k], g2y = j2.uy[k];
    const double m2sq = g2x * g2x + g2y * g2y;
    const double du2 = a1.m2 + m2sq;
    // gamma1 = <grad|grad u1|, grad u1/|grad u1|>
    const double gamma1 = (a1.dgx * a1.gx + a1.dgy * a1.gy) / a1.m;
    // safe form of |grad u2|^2 <grad u1, grad|grad u2|/|grad u2|>:
    //   <grad u1, grad |grad u2|^2> / 2
    const double gq2x = 2 * (j2.uxx[k] * g2x + j2.uxy[k] * g2y);
    const double gq2y = 2 * (j2.uxy[k] * g2x + j2.uyy[k] * g2y);
    const double mixed = 0.5 * (a1.gx * gq2x + a1.gy * gq2y);  // |gu2|^2 <gu1, d|gu2|/|gu2|>
    const double A = (p - 2) * (a1.m2 / du2) * gamma1 * gamma1;
    const double B = (p - 2) * (mixed / du2) * gamma1;
    const double C = a1.dgx * a1.dgx + a1.dgy * a1.dgy;
    const double m4 = a1.m2 * a1.m2;
    out.abc.values()[k] = (A + B + C) / m4;
    const double esum = mixed / du2 + (a1.m2 / du2) * gamma1;
    const double E = (p - 2) * (p - 2) * (esum * esum - (m4 / (du2 * du2)) * gamma1 * gamma1);
    out.e.values()[k] = E / m4;
  }
  return out;
}

IsoIntegrands iso_gradient_integrands(const MapJets& jets, double grad_tol) {
  IsoIntegrands out{ScalarField(jets.j1.grid), ScalarField(jets.j1.grid)};
  const std::size_t n = jets.j1.grid->size();
  for (std::size_t k = 0; k < n; ++k) {
    JetAux a1;
    if (!jet_aux(jets.j1, k, grad_tol, a1)) continue;
    if (!jets.j2.defined[k]) continue;
    const ScalarJet& j2 = jets.j2;
    const double g2x = j2.ux[k], g2y = j2.uy[k];
    const double gq2x = 2 * (j2.uxx[k] * g2x + j2.uxy[k] * g2y);  // grad |grad u2|^2
    const double gq2y = 2 * (j2.uxy[k] * g2x + j2.uyy[k] * g2y);
    const double m4 = a1.m2 * a1.m2;
    out.i1.values()[k] = (a1.dgx * a1.dgx + a1.dgy * a1.dgy) / m4;
    out.i2.values()[k] = (gq2x * gq2x + gq2y * gq2y) / (m4 * a1.m2);
  }
  return out;
}

LengthFunction length_function(const ScalarField& u, const ScalarJet& jet, double p,
                               const std::vector<double>& s_samples, const MapJets* map_context,
                               double grad_tol) {
  const GridPtr grid = u.grid_ptr();
  const std::size_t ns = s_samples.size();
  LengthFunction lf;
  lf.s = s_samples;
  lf.L.assign(ns, kNaN);
  lf.Lp_int.assign(ns, kNaN);
  lf.Lp_fd.assign(ns, kNaN);
  lf.Lpp_int.assign(ns, kNaN);
  lf.Lpp_fd.assign(ns, kNaN);
  lf.E_term.assign(ns, kNaN);
  lf.valid.assign(ns, 0);

  // L' integrand: div(grad u/|grad u|)/|grad u| = -k/|grad u|
  ScalarField lp_integrand(grid), grad_norm(grid);
  {
    ScalarField k_field = curvature_k(jet, p, KMode::Divergence, grad_tol);
    for (std::size_t k = 0; k < grid->size(); ++k) {
      JetAux a;
      if (!jet_aux(jet, k, grad_tol, a)) continue;
      grad_norm.values()[k] = a.m;
      if (!std::isfinite(k_field.values()[k])) continue;
      lp_integrand.values()[k] = -k_field.values()[k] / a.m;
    }
  }

  ScalarField lpp_integrand(grid), e_integrand(grid);
  if (map_context) {
    auto pieces = lpp_vectorial_integrands(*map_context, p, grad_tol);
    lpp_integrand = std::move(pieces.abc);
    e_integrand = std::move(pieces.e);
  } else {
    // scalar route: difference the derived node fields
    ScalarField wx(grid), wy(grid), qinv(grid);
    for (std::size_t k = 0; k < grid->size(); ++k) {
      JetAux a;
      if (!jet_aux(jet, k, grad_tol, a)) continue;
      const double m3 = a.m2 * a.m;
      wx.values()[k] = a.gx * a.lap / m3;
      wy.values()[k] = a.gy * a.lap / m3;
      qinv.values()[k] = 1.0 / a.m;
    }
    ScalarField divw = divergence(wx, wy);
    ScalarField lq = laplacian(qinv);
    for (std::size_t k = 0; k < grid->size(); ++k) {
      JetAux a;
      if (!jet_aux(jet, k, grad_tol, a)) continue;
      const double d = divw.values()[k], l = lq.values()[k];
      if (!std::isfinite(d) || !std::isfinite(l)) continue;
      lpp_integrand.values()[k] = (d + l) / a.m;
    }
    // the nested stencils lose two rings at the mask edge; extend by nearest
    // values so boundary-terminated levels keep an integrand
    lpp_integrand = dilate_nearest(lpp_integrand, 2);
  }

  for (std::size_t si = 0; si < ns; ++si) {
    auto curves = extract_level(u, s_samples[si]);
    if (curves.empty()) continue;
    // reject levels that touch singular nodes (|grad u| below threshold)
    bool singular = false;
    for (auto& c : curves)
      for (const auto& v : c.vertices) {
        const double gn = bilinear(grad_norm, v[0], v[1]);
        if (std::isfinite(gn) && gn <= grad_tol) singular = true;
      }
    if (singular) continue;
    double L = 0;
    for (const auto& c : curves) L += c.total_length;
    const auto lp = line_integral(curves, lp_integrand);
    const auto lpp = line_integral(curves, lpp_integrand);
    if (!lp.ok || !lpp.ok) continue;  // no usable integrand data on the level
    lf.L[si] = L;
    lf.Lp_int[si] = lp.value;
    lf.Lpp_int[si] = lpp.value;
    if (map_context) {
      const auto et = line_integral(curves, e_integrand);
      if (et.ok) lf.E_term[si] = et.value;
    }
    lf.valid[si] = 1;
  }

  for (std::size_t si = 0; si + 2 < ns; ++si) {
    if (!lf.valid[si] || !lf.valid[si + 1] || !lf.valid[si + 2]) continue;
    const double h0 = lf.s[si + 1] - lf.s[si], h1 = lf.s[si + 2] - lf.s[si + 1];
    const double f0 = lf.L[si], f1 = lf.L[si + 1], f2 = lf.L[si + 2];
    lf.Lp_fd[si + 1] = (f2 * h0 * h0 - f0 * h1 * h1 + f1 * (h1 * h1 - h0 * h0)) /
                       (h0 * h1 * (h0 + h1));
    lf.Lpp_fd[si + 1] = 2 * (h0 * f2 + h1 * f0 - (h0 + h1) * f1) / (h0 * h1 * (h0 + h1));
  }
  return lf;
}

LengthFunction length_function(const ScalarField& u, double p,
                               const std::vector<double>& s_samples, const PlanarMap* map_context,
                               double grad_tol) {
  const ScalarJet jet = stencil_jet(u);
  if (!map_context) return length_function(u, jet, p, s_samples, nullptr, grad_tol);
  const MapJets jets = stencil_jets(*map_context);
  return length_function(u, jet, p, s_samples, &jets, grad_tol);
}

void write_length_csv(const std::string& path, const LengthFunction& lf) {
  std::ofstream out(path);
  out << "# level-length function: L(s) = int_{u=s} dH1;"
         " L'(s) = int div(grad u/|grad u|) dH1/|grad u|;"
         " L''(s) = int [div(grad u lap u/|grad u|^3) + lap(1/|grad u|)] dH1/|grad u|"
         " (vectorial runs: L'' = int (A_u+B_u+C_u)/|grad u1|^4 dH1)\n";
  out << "s,L,Lp_int,Lp_fd,Lpp_int,Lpp_fd,E_term,valid\n";
  char buf[320];
  for (std::size_t k = 0; k < lf.s.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", lf.s[k],
                  lf.L[k], lf.Lp_int[k], lf.Lp_fd[k], lf.Lpp_int[k], lf.Lpp_fd[k], lf.E_term[k],
                  lf.valid[k] ? 1 : 0);
    out << buf;
  }
}

double ball_node_weight(const Grid2D& g, int i, int j, double cx, double cy, double R) {
  const double w = g.node_weight(i, j);
  if (w == 0) return 0;
  const double x0 = g.x(i) - g.hx() / 2, y0 = g.y(j) - g.hy() / 2;
  int hits = 0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const double sx = x0 + (a + 0.5) * g.hx() / 4;
      const double sy = y0 + (b + 0.5) * g.hy() / 4;
      if (std::hypot(sx - cx, sy - cy) < R) ++hits;
    }
  return w * hits / 16.0;
}

LengthBoundReport length_bound_check(const ScalarField& u, const ScalarJet& jet, double cx,
                                     double cy, double R, double s, double grad_tol) {
  LengthBoundReport rep;
  rep.two_pi_r = 2 * M_PI * R;

  auto curves = extract_level(u, s);
  rep.length = length_in_ball(curves, cx, cy, R);

  // premise: no singular nodes on the level inside B
  rep.level_ok = true;
  const Grid2D& g = u.grid();
  ScalarField k_field = curvature_k(jet, 2.0, KMode::Divergence, grad_tol);
  for (const auto& c : curves)
    for (const auto& v : c.vertices) {
      if (std::hypot(v[0] - cx, v[1] - cy) >= R) continue;
      if (!std::isfinite(bilinear(k_field, v[0], v[1]))) rep.level_ok = false;
    }

  double acc = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.interior(i, j)) continue;
      const double kv = k_field.at(i, j);
      if (!std::isfinite(kv)) continue;  // singular node, excluded
      acc += ball_node_weight(g, i, j, cx, cy, R) * std::fabs(kv);
    }
  rep.k_integral = acc;
  rep.slack = rep.k_integral + rep.two_pi_r - rep.length;
  rep.holds = rep.slack >= 0;
  return rep;
}

}  // namespace pharmap
