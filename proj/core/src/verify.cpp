#include "pharmap/verify.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "pharmap/cgrad.hpp"
#include "pharmap/curvature.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/solver.hpp"

namespace pharmap {

using nlohmann::json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Violated: return "violated";
    default: return "inconclusive";
  }
}

json CheckResult::to_json() const {
  json j{{"name", name}, {"verdict", to_string(verdict)}, {"tolerance", tolerance},
         {"details", details}};
  if (witness) {
    j["witness"] = {{"i", witness->i},         {"j", witness->j},       {"x", witness->x},
                    {"y", witness->y},         {"value", witness->value},
                    {"margin", witness->margin}};
  }
  return j;
}

void write_checks_json(const std::string& path, const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(c.to_json());
  std::ofstream out(path);
  out << arr.dump(2) << "\n";
}

void print_checks_table(const std::vector<CheckResult>& checks) {
  std::printf("%-28s %-14s %s\n", "check", "verdict", "notes");
  for (const auto& c : checks) {
    std::string note;
    if (c.witness) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "witness at (%.4g, %.4g), margin %.3g", c.witness->x,
                    c.witness->y, c.witness->margin);
      note = buf;
    }
    std::printf("%-28s %-14s %s\n", c.name.c_str(), to_string(c.verdict).c_str(), note.c_str());
  }
}

double det_hessian_error_scale(const ScalarField& u) {
  const Grid2D& g = u.grid();
  if (g.nx() % 2 == 0 || g.ny() % 2 == 0) return 1e-10;
  GridPtr cg = coarsen(g);
  ScalarField uc = restrict_to(u, cg);
  ScalarField fine = det_hessian(u);
  ScalarField coarse = det_hessian(uc);
  double scale = 0;
  for (int j = 0; j < cg->ny(); ++j)
    for (int i = 0; i < cg->nx(); ++i) {
      if (!cg->interior(i, j) || !g.interior(2 * i, 2 * j)) continue;
      const double d = coarse.at(i, j) - fine.at(2 * i, 2 * j);
      if (std::isfinite(d)) scale = std::max(scale, std::fabs(d) / 3.0);
    }
  return std::max(scale, 1e-12);
}

CheckResult check_hessian_sign(const PlanarMap& u, const MapJets& jets,
                               std::optional<double> tol_override) {
  CheckResult res;
  res.name = "hessian-sign";
  const double ap = entry_bound(u.p);
  const double cap = 16 * ap * ap;
  const bool in_range = cap <= 1.0 + 1e-12;
  const double tol =
      tol_override ? *tol_override : 10.0 * det_hessian_error_scale(u.u1);
  res.tolerance = tol;

  const ScalarField det1 = det_hessian(jets.j1);
  const ScalarField det2 = det_hessian(jets.j2);
  const Grid2D& g = u.u1.grid();

  double worst_sign = -std::numeric_limits<double>::infinity();
  double worst_eq2 = -std::numeric_limits<double>::infinity();
  Witness wit;
  std::size_t nodes = 0, hyp_nodes = 0;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.idx(i, j);
      if (!jets.j1.defined[k] || !jets.j2.defined[k]) continue;
      const double d1 = det1.values()[k], d2 = det2.values()[k];
      if (!std::isfinite(d1) || !std::isfinite(d2)) continue;
      ++nodes;
      if (d2 >= tol) {
        ++hyp_nodes;
        if (d1 - tol > worst_sign) {
          worst_sign = d1 - tol;
          wit = Witness{i, j, g.x(i), g.y(j), d1, d1 - tol};
        }
      }
      // quantitative bound from the proof chain, unconditional in p
      const cplx fz = 0.25 * cplx(jets.j1.uxx[k] - jets.j1.uyy[k], -2 * jets.j1.uxy[k]);
      const double lap2 = jets.j2.uxx[k] + jets.j2.uyy[k];
      const double rhs = 4 * (cap - 1) * (std::norm(fz) + lap2 * lap2 / 16) - cap * d2;
      worst_eq2 = std::max(worst_eq2, d1 - rhs);
    }

  const bool sign_ok = worst_sign <= 0;
  const bool eq2_ok = worst_eq2 <= tol;
  res.details = json{{"p", u.p},
                     {"entry_bound", ap},
                     {"sixteen_ap_sq", cap},
                     {"p_in_range", in_range},
                     {"nodes", nodes},
                     {"hypothesis_nodes", hyp_nodes},
                     {"max_sign_violation", sign_ok ? 0.0 : worst_sign},
                     {"max_quantitative_violation", worst_eq2},
                     {"quantitative_ok", eq2_ok}};
  if (!sign_ok) {
    res.verdict = Verdict::Violated;
    res.witness = wit;
  } else {
    res.verdict = (in_range && !eq2_ok) ? Verdict::Violated : Verdict::Holds;
  }
  return res;
}

CheckResult check_max_principle(const PlanarMap& u, double tol) {
  CheckResult res;
  res.name = "max-principle";
  res.tolerance = tol;
  const Grid2D& g = u.u1.grid();
  double margin = std::numeric_limits<double>::infinity();
  Witness wit;
  json comp = json::array();
  for (int m = 0; m < 2; ++m) {
    const ScalarField& f = m == 0 ? u.u1 : u.u2;
    double bmax = -std::numeric_limits<double>::infinity();
    double imax = -std::numeric_limits<double>::infinity();
    int wi = -1, wj = -1;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const auto st = g.state(i, j);
        if (st == NodeState::Boundary) bmax = std::max(bmax, f.at(i, j));
        if (st == NodeState::Interior && f.at(i, j) > imax) {
          imax = f.at(i, j);
          wi = i;
          wj = j;
        }
      }
    const double this_margin = bmax - imax;
    comp.push_back({{"component", m + 1}, {"boundary_max", bmax}, {"interior_max", imax},
                    {"margin", this_margin}});
    if (this_margin < margin) {
      margin = this_margin;
      wit = Witness{wi, wj, g.x(wi), g.y(wj), imax, this_margin};
    }
  }
  res.details = json{{"components", comp}, {"min_margin", margin}};
  if (margin >= -tol) {
    res.verdict = Verdict::Holds;
  } else {
    res.verdict = Verdict::Violated;
    res.witness = wit;
  }
  return res;
}

namespace {

// deepest interior node (max distance to a non-interior node) for the
// reported Uhlenbeck-type ratio
struct Ball {
  double cx, cy, R;
};

Ball auto_ball(const Grid2D& g) {
  int bi = 0, bj = 0;
  double best = -1;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      if (!g.interior(i, j)) continue;
      // distance to the nearest non-interior node along the axes
      double d = std::numeric_limits<double>::infinity();
      for (int t = 1; t < std::max(g.nx(), g.ny()); ++t) {
        bool hit = !g.interior(i + t, j) || !g.interior(i - t, j) || !g.interior(i, j + t) ||
                   !g.interior(i, j - t);
        if (hit) {
          d = t * std::min(g.hx(), g.hy());
          break;
        }
      }
      if (d > best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  return Ball{g.x(bi), g.y(bj), best / 2};
}

double uhlenbeck_ratio(const PlanarMap& u, const MapJets& jets, const Ball& b) {
  const Grid2D& g = u.u1.grid();
  double sup_inner = 0;
  std::vector<double> lp_terms;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.idx(i, j);
      if (!jets.j1.defined[k] || !jets.j2.defined[k]) continue;
      const double du2 = jets.j1.ux[k] * jets.j1.ux[k] + jets.j1.uy[k] * jets.j1.uy[k] +
                         jets.j2.ux[k] * jets.j2.ux[k] + jets.j2.uy[k] * jets.j2.uy[k];
      const double r = std::hypot(g.x(i) - b.cx, g.y(j) - b.cy);
      if (r < b.R) sup_inner = std::max(sup_inner, std::sqrt(du2));
      if (r < 2 * b.R)
        lp_terms.push_back(g.node_weight(i, j) * std::pow(du2, u.p / 2));
    }
  const double lp_norm = std::pow(pairwise_sum(lp_terms), 1.0 / u.p);
  if (lp_norm == 0) return 0;
  return sup_inner * std::pow(b.R, 2.0 / u.p) / lp_norm;
}

}  // namespace

CheckResult check_isoperimetric(const PlanarMap& u, const MapJets& jets, const RegionSpec& region,
                                const IsoOptions& opts) {
  CheckResult res;
  res.name = "isoperimetric";
  const double p = u.p;
  const Grid2D& g = u.u1.grid();

  // region membership + gradient lower bound premise
  double min_grad = std::numeric_limits<double>::infinity();
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.idx(i, j);
      if (!jets.j1.defined[k]) continue;
      bool inside = false;
      if (region.kind == RegionSpec::Kind::LevelBand) {
        const double v = u.u1.at(i, j);
        inside = v > region.a && v < region.b;
      } else {
        const double r = std::hypot(g.x(i), g.y(j));
        inside = r > region.a && r < region.b;
      }
      if (!inside) continue;
      min_grad = std::min(min_grad, std::hypot(jets.j1.ux[k], jets.j1.uy[k]));
    }
  if (!(min_grad > opts.grad_lower)) {
    res.verdict = Verdict::Inconclusive;
    res.details = json{{"reason", "gradient lower bound violated"},
                       {"min_grad", std::isfinite(min_grad) ? min_grad : 0.0},
                       {"required", opts.grad_lower}};
    return res;
  }

  // u1 must be constant per boundary component of the region. A level band
  // satisfies this by construction; an annulus region is checked against the
  // u1 spread over the nodes nearest each bounding circle.
  if (region.kind == RegionSpec::Kind::Annulus) {
    const double band = 1.5 * std::max(g.hx(), g.hy());
    double max_grad = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (jets.j1.defined[k])
        max_grad = std::max(max_grad, std::hypot(jets.j1.ux[k], jets.j1.uy[k]));
    for (double radius : {region.a, region.b}) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          if (!g.in(i, j)) continue;
          if (std::fabs(std::hypot(g.x(i), g.y(j)) - radius) > band) continue;
          lo = std::min(lo, u.u1.at(i, j));
          hi = std::max(hi, u.u1.at(i, j));
        }
      // discretization alone moves u1 by up to |grad u1| * 2 * band here
      const double allowed = 2.5 * band * max_grad + 1e-12;
      if (!(hi - lo <= allowed)) {
        res.verdict = Verdict::Inconclusive;
        res.details = json{{"reason", "u1 not constant on a region boundary component"},
                           {"radius", radius},
                           {"spread", hi - lo},
                           {"allowed", allowed}};
        return res;
      }
    }
  }

  LengthFunction lf = length_function(u.u1, jets.j1, p, opts.s_samples, &jets);
  IsoIntegrands integrands = iso_gradient_integrands(jets);

  const double alpha = 2.25 * (p - 2) * (p - 2) + 1 - p;
  const double beta = 2.25 * (p - 2) * (p - 2);

  json samples = json::array();
  double worst = std::numeric_limits<double>::infinity();  // min slack / equality margin
  Witness wit;
  bool any_valid = false;
  for (std::size_t si = 0; si < lf.s.size(); ++si) {
    if (!lf.valid[si]) continue;
    const double s = lf.s[si], L = lf.L[si], Lp = lf.Lp_int[si], Lpp = lf.Lpp_int[si];
    json row{{"s", s}, {"L", L}, {"Lp", Lp}, {"Lpp", Lpp}};
    any_valid = true;
    double margin = 0;
    if (p == 2.0) {
      const double lnlpp = (Lpp * L - Lp * Lp) / (L * L);
      row["lnL_second"] = lnlpp;
      const double tol = 1e-3 * opts.tol_scale;
      margin = opts.expect_radial_equality ? tol - std::fabs(lnlpp) : lnlpp + tol;
      res.tolerance = tol;
    } else {
      auto curves = extract_level(u.u1, s);
      const auto i1 = line_integral(curves, integrands.i1);
      const auto i2 = line_integral(curves, integrands.i2);
      if (!i1.ok || !i2.ok) continue;
      const double lhs = -(1.0 / p) * std::pow(L, -1.0 - 1.0 / p) * (Lp * Lp - p * L * Lpp);
      const double rhs = -std::pow(L, -1.0 / p) * (alpha / p * i1.value + beta / p * i2.value);
      const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1.0});
      const double tol = 1e-6 * scale * opts.tol_scale;
      res.tolerance = tol;
      margin = lhs - rhs + tol;
      row["lhs"] = lhs;
      row["rhs"] = rhs;
      row["slack"] = lhs - rhs;
      row["I1"] = i1.value;
      row["I2"] = i2.value;
      if (opts.expect_radial_equality) {
        const double lratio = Lp * Lp / L;
        const double target = (p - 1) * Lpp;
        row["equality_lhs"] = lratio;
        row["equality_rhs"] = target;
        const double eq_margin = 0.01 * std::fabs(target) - std::fabs(lratio - target);
        margin = std::min(margin, eq_margin);
      }
    }
    if (margin < worst) {
      worst = margin;
      wit = Witness{-1, -1, s, 0, L, margin};
    }
    samples.push_back(row);
  }

  const Ball ball = auto_ball(g);
  res.details = json{{"p", p},
                     {"min_grad", min_grad},
                     {"alpha", alpha},
                     {"beta", beta},
                     {"samples", samples},
                     {"uhlenbeck_ratio", uhlenbeck_ratio(u, jets, ball)},
                     {"uhlenbeck_ball", {{"cx", ball.cx}, {"cy", ball.cy}, {"R", ball.R}}}};
  if (!any_valid) {
    res.verdict = Verdict::Inconclusive;
    res.details["reason"] = "no valid level samples";
    return res;
  }
  if (worst >= 0) {
    res.verdict = Verdict::Holds;
  } else {
    res.verdict = Verdict::Violated;
    res.witness = wit;
  }
  return res;
}

CheckResult check_kphi_integrability(const PlanarMap& u, const MapJets& jets, double cx, double cy,
                                     double R, double s, double min_f) {
  CheckResult res;
  res.name = "kphi-integrability";
  const Grid2D& g = u.u1.grid();
  const ComplexJet fj = complex_jet(jets.j1);
  const ComplexJet gj = complex_jet(jets.j2);

  double inf_f = std::numeric_limits<double>::infinity();
  std::vector<double> lhs_terms, mid_terms, inv_terms;
  bool level_found = false;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t k = g.idx(i, j);
      if (!fj.defined[k] || !gj.defined[k]) continue;
      const double w = ball_node_weight(g, i, j, cx, cy, R);
      if (w == 0) continue;
      const double af = std::abs(fj.f[k]);
      inf_f = std::min(inf_f, af);
      if (af <= 0) continue;
      const cplx fz = fj.fz[k], gz = gj.fz[k], fzb = fj.fzb[k];
      // 2|f| k = -2 f_zbar + f/fbar conj(f_z) + fbar/f f_z
      const cplx expr = -2.0 * fzb + (fj.f[k] / std::conj(fj.f[k])) * std::conj(fz) +
                        (std::conj(fj.f[k]) / fj.f[k]) * fz;
      lhs_terms.push_back(w * std::fabs(expr.real() / (2 * af)));
      mid_terms.push_back(w * (std::norm(fz) + std::norm(gz)));
      inv_terms.push_back(w / (af * af));
    }
  // is the level present inside the ball?
  for (const auto& c : extract_level(u.u1, s))
    for (const auto& v : c.vertices)
      if (std::hypot(v[0] - cx, v[1] - cy) < R) level_found = true;

  if (!(inf_f > min_f)) {
    res.verdict = Verdict::Inconclusive;
    res.details = json{{"reason", "|f| lower bound not certified"},
                       {"min_f_observed", std::isfinite(inf_f) ? inf_f : 0.0},
                       {"required", min_f}};
    return res;
  }
  const double lhs = pairwise_sum(lhs_terms);
  const double mid = std::sqrt(pairwise_sum(mid_terms));
  const double inv = std::sqrt(pairwise_sum(inv_terms));
  const double Ap = lemma_constant(u.p);
  const double rhs = 2 * Ap * mid * inv;
  res.tolerance = 1e-9 * std::max(1.0, rhs);
  res.details = json{{"p", u.p},       {"A_p", Ap},
                     {"lhs", lhs},     {"rhs", rhs},
                     {"slack", rhs - lhs}, {"min_f", inf_f},
                     {"level_in_ball", level_found}};
  if (lhs <= rhs + res.tolerance) {
    res.verdict = Verdict::Holds;
  } else {
    res.verdict = Verdict::Violated;
    res.witness = Witness{-1, -1, cx, cy, lhs, rhs - lhs};
  }
  return res;
}

}  // namespace pharmap
