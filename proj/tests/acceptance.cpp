// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are pinned here, not configurable.
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "pharmap/cgrad.hpp"
#include "pharmap/curvature.hpp"
#include "pharmap/families.hpp"
#include "pharmap/field_io.hpp"
#include "pharmap/lengthfn.hpp"
#include "pharmap/levelcurve.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/radial.hpp"
#include "pharmap/solver.hpp"
#include "pharmap/verify.hpp"

using namespace pharmap;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void criterion(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d %-24s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

SolveOptions newton(double tol = 1e-8, double eps = 1e-8) {
  SolveOptions o;
  o.method = SolveMethod::DampedNewton;
  o.grad_tol = tol;
  o.epsilon_reg = eps;
  o.max_iters = 400;
  return o;
}

struct Solved {
  std::string label;
  PlanarMap map;
  SolveReport report;
  double grad_tol;
};

std::vector<Solved> g_solves;  // consumed by criterion 9

PlanarMap solve_tracked(const std::string& label, const AnalyticMap& fam, const GridPtr& g,
                        double p, const SolveOptions& o) {
  SolveReport rep;
  auto sol = solve_dirichlet(sample_map(fam, g, p), o, rep);
  g_solves.push_back({label, sol, rep, o.grad_tol});
  if (!rep.converged)
    std::printf("  !! solve '%s' did not converge (grad %.3e)\n", label.c_str(), rep.grad_norm);
  return sol;
}

GridPtr annulus(double r0, double r1, double half, int n) {
  return make_grid(AnnulusSpec{r0, r1, RectSpec{-half, half, -half, half}}, n, n);
}

// stencil-error scale of the complex-jet entries from a refinement pair
double jet_error_scale(const ScalarField& u) {
  const Grid2D& g = u.grid();
  if (g.nx() % 2 == 0 || g.ny() % 2 == 0) return 1e-10;
  auto cg = coarsen(g);
  auto uc = restrict_to(u, cg);
  auto jf = stencil_jet(u), jc = stencil_jet(uc);
  double scale = 0;
  for (int j = 0; j < cg->ny(); ++j)
    for (int i = 0; i < cg->nx(); ++i) {
      const std::size_t kc = cg->idx(i, j);
      const std::size_t kf = g.idx(2 * i, 2 * j);
      if (!jc.defined[kc] || !jf.defined[kf]) continue;
      scale = std::max({scale, std::fabs(jc.uxx[kc] - jf.uxx[kf]) / 3,
                        std::fabs(jc.uyy[kc] - jf.uyy[kf]) / 3,
                        std::fabs(jc.uxy[kc] - jf.uxy[kf]) / 3});
    }
  return std::max(scale, 1e-12);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PHARMAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

// ---------------------------------------------------------------------------

PlanarMap criterion1_harmonic_regression() {
  const auto t0 = std::chrono::steady_clock::now();
  set_num_threads(1);
  auto g = make_grid(RectSpec{0, 1, 0, 1}, 129, 129);
  auto sol = solve_tracked("harmonic-129", map_harmonic_quad(1.0), g, 2.0, newton(1e-9, 0.0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double err = 0;
  const auto exact = map_harmonic_quad(1.0);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i) {
      err = std::max(err, std::fabs(sol.u1.at(i, j) - exact.u1.value(g->x(i), g->y(j))));
      err = std::max(err, std::fabs(sol.u2.at(i, j) - exact.u2.value(g->x(i), g->y(j))));
    }
  criterion(1, "harmonic-regression", err <= 5e-4 && secs <= 60.0,
            fmt("max err %.3e (<= 5e-4), %.2f s single-threaded (<= 60 s)", err, secs));
  return sol;
}

PlanarMap criterion2_radial_consistency(const RadialProfile& prof) {
  auto g = annulus(1, 2, 2, 65);
  auto sol = solve_tracked("radial-p3-65", map_radial(prof), g, 3.0, newton(1e-9));
  double worst = 0;
  for (double r_target : {1.25, 1.5, 1.75}) {
    for (int j = 0; j < g->ny(); ++j)
      for (int i = 0; i < g->nx(); ++i) {
        if (!g->interior(i, j)) continue;
        const double x = g->x(i), y = g->y(j);
        const double r = std::hypot(x, y);
        if (std::fabs(r - r_target) > g->hx() / 2) continue;
        const double H_num = (x * sol.u1.at(i, j) + y * sol.u2.at(i, j)) / (r * r);
        const double H_ode = eval_profile(prof, r).H;
        worst = std::max(worst, std::fabs(H_num - H_ode) / std::fabs(H_ode));
      }
  }
  criterion(2, "radial-consistency", worst <= 0.01,
            fmt("max rel err %.4f%% at r in {1.25, 1.5, 1.75} (<= 1%%)", 100 * worst));
  return sol;
}

void criterion3_matrix_certificate() {
  Rng rng(20240809);
  const double ps[] = {1.2, 4.0 / 3.0, 1.7, 2.0, 2.5, 3.0, 3.41, 5.0, 12.0};
  double worst_entry = -1e300, worst_phi = 1e300;
  const int n = 100000;
  for (int t = 0; t < n; ++t) {
    const cplx f = std::polar(rng.log_uniform(0.3, 30.0), rng.uniform(0, 2 * M_PI));
    const cplx g = std::polar(rng.log_uniform(0.3, 30.0), rng.uniform(0, 2 * M_PI));
    for (double p : ps) {
      const auto e = coefficient_entry(f, g, p);
      const double m = std::max({std::abs(e.a11), std::abs(e.a12), std::abs(e.a21),
                                 std::abs(e.a22)});
      worst_entry = std::max(worst_entry, m - entry_bound(p));
      const double s = std::norm(f) / std::norm(g);
      worst_phi = std::min(worst_phi, e.phi - (16 * p + 8 * p * (s + 1 / s)));
    }
  }
  criterion(3, "matrix-bound-certificate", worst_entry <= 1e-12 && worst_phi >= -1e-9,
            fmt("%d pairs x 9 p: max entry excess %.2e (<= 1e-12), min Phi margin %.2e (>= -1e-9)",
                n, worst_entry, worst_phi));
}

void criterion4_theorem2_range(const PlanarMap& radial_sol, const CounterexampleResult& ce) {
  bool range_ok = true;
  for (double p : {4.0 / 3.0, 1.5, 2.0, 2.5, 3.0, 3.41, 2 + std::sqrt(2.0)})
    range_ok = range_ok && 16 * entry_bound(p) * entry_bound(p) <= 1.0 + 1e-12;
  for (double p : {1.2, 3.5, 5.0})
    range_ok = range_ok && 16 * entry_bound(p) * entry_bound(p) > 1.0;

  bool sign_ok = true, quant_ok = true;
  std::string sign_note;
  for (double p : {4.0 / 3.0, 1.6, 2.0, 2.5, 2 + std::sqrt(2.0)}) {
    auto g = make_grid(RectSpec{0, 1, 0, 1}, 65, 65);
    auto sol = solve_tracked(fmt("harmonic-p%.3f", p), map_harmonic_quad(1.0), g, p, newton());
    auto res = check_hessian_sign(sol, stencil_jets(sol));
    sign_ok = sign_ok && res.verdict == Verdict::Holds;
    quant_ok = quant_ok && res.details.at("quantitative_ok").get<bool>();
  }
  {  // quantitative bound on every p-harmonic input, including out-of-range ones
    auto res = check_hessian_sign(radial_sol, stencil_jets(radial_sol));
    sign_ok = sign_ok && res.verdict == Verdict::Holds;
    quant_ok = quant_ok && res.details.at("quantitative_ok").get<bool>();
    auto jets = analytic_jets(map_radial(ce.profile), ce.sector);
    auto rce = check_hessian_sign(ce.map, jets, ce.tol);
    quant_ok = quant_ok &&
               rce.details.at("max_quantitative_violation").get<double>() <= rce.tolerance;
  }
  criterion(4, "theorem2-range", range_ok && sign_ok && quant_ok,
            fmt("16Ap^2 range exact: %s; sign relation holds on 6 solved maps: %s; "
                "quantitative bound node-wise everywhere: %s",
                range_ok ? "yes" : "no", sign_ok ? "yes" : "no", quant_ok ? "yes" : "no"));
}

void criterion5_counterexample(const CounterexampleResult&) {
  const fs::path dir = fs::temp_directory_path() / "pharmap_acc_radial";
  fs::remove_all(dir);
  const int rc = run_cli("radial --p 12 --c 1.01 --mode counterexample --resolution 385 --out " +
                         dir.string());
  bool cli_ok = rc == 0;
  double min1 = 1, min2 = 1, tol = 0;
  if (cli_ok) {
    std::ifstream in(dir / "counterexample.json");
    json j;
    in >> j;
    min1 = j.at("min_det_h_u1").get<double>();
    min2 = j.at("min_det_h_u2").get<double>();
    tol = j.at("tolerance").get<double>();
    cli_ok = j.at("both_nonnegative").get<bool>() && min1 >= -tol && min2 >= -tol;
  }
  const double c_exact = (-12.0 + 10.0 * std::sqrt(12.0)) / 22.0;
  const double c_err = std::fabs(admissible_c_interval(12.0).c_high - c_exact);
  criterion(5, "counterexample", cli_ok && c_err <= 1e-12,
            fmt("min det H(u1) %.3e, min det H(u2) %.3e (tol %.1e); c_high err %.1e (<= 1e-12)",
                min1, min2, tol, c_err));
}

void criterion6_curvature_agreement(const PlanarMap& radial_sol) {
  // mode agreement on u = r^2 (stencil jets) and on a solved field
  double worst_mode = 0;
  auto agree = [&](const ScalarJet& jet, double p) {
    auto k0 = curvature_k(jet, p, KMode::Divergence, 0.1);
    for (KMode m : {KMode::GradientSplit, KMode::Complex}) {
      auto km = curvature_k(jet, p, m, 0.1);
      for (std::size_t k = 0; k < k0.values().size(); ++k) {
        const double a = k0.values()[k], b = km.values()[k];
        if (!std::isfinite(a) || !std::isfinite(b)) continue;
        worst_mode = std::max(worst_mode, std::fabs(a - b) / std::max(1.0, std::fabs(a)));
      }
    }
  };
  auto g = make_grid(RectSpec{-3, 3, -3, 3}, 257, 257);
  auto u = sample(analytic_radial_square(), g);
  auto jet = stencil_jet(u);
  agree(jet, 2.0);
  agree(stencil_jet(radial_sol.u1), 3.0);

  // circle test: interpolated k along the extracted level r = 2
  auto k_field = curvature_k(jet, 2.0, KMode::Divergence, 1e-8);
  auto curves = extract_level(u, 4.0);
  double worst_circle = 0;
  std::size_t nv = 0;
  for (auto& c : curves) {
    ScalarField gn(g);
    for (std::size_t k = 0; k < g->size(); ++k)
      if (jet.defined[k]) gn.values()[k] = std::hypot(jet.ux[k], jet.uy[k]);
    attach_curve_samples(c, gn, k_field);
    for (double kv : c.curvature) {
      if (!std::isfinite(kv)) continue;
      ++nv;
      worst_circle = std::max(worst_circle, std::fabs(kv - (-0.5)));
    }
  }

  // phi = k + i h node-wise
  double worst_phi = 0;
  auto phi = phi_field(jet, 1e-3);
  auto kd = curvature_k(jet, 2.0, KMode::Divergence, 1e-3);
  auto hd = curvature_h(jet, 1e-3);
  for (std::size_t k = 0; k < g->size(); ++k) {
    const cplx p = phi.values()[k];
    if (!std::isfinite(p.real()) || !std::isfinite(kd.values()[k])) continue;
    worst_phi = std::max({worst_phi, std::fabs(p.real() - kd.values()[k]),
                          std::fabs(p.imag() - hd.values()[k])});
  }
  criterion(6, "curvature-agreement",
            worst_mode <= 1e-8 && worst_circle <= 1e-3 && nv > 100 && worst_phi <= 1e-7,
            fmt("mode spread %.1e (<= 1e-8); circle |k+1/2| %.2e over %zu samples (<= 1e-3); "
                "|phi-(k+ih)| %.1e (<= 1e-7)",
                worst_mode, worst_circle, nv, worst_phi));
}

void criterion7_length_bound(const PlanarMap& radial_sol) {
  auto g = make_grid(RectSpec{-2.5, 2.5, -2.5, 2.5}, 513, 513);
  auto u = sample(analytic_radial_square(), g);
  auto jet = stencil_jet(u);
  auto rep = length_bound_check(u, jet, 0, 0, 2.0, 1.0);
  const double l_err = std::fabs(rep.length - 2 * M_PI) / (2 * M_PI);
  const double k_err = std::fabs(rep.k_integral - 4 * M_PI) / (4 * M_PI);

  bool solved_ok = true;
  double min_slack = 1e300;
  auto sjet = stencil_jet(radial_sol.u1);
  for (double s : {1.3, 1.6, 1.9}) {
    auto r = length_bound_check(radial_sol.u1, sjet, 1.5, 0, 0.45, s);
    if (!r.level_ok) continue;
    solved_ok = solved_ok && r.slack >= 0;
    min_slack = std::min(min_slack, r.slack);
  }
  criterion(7, "length-bound",
            rep.level_ok && l_err <= 0.001 && k_err <= 0.005 && rep.slack > 0 && solved_ok,
            fmt("L err %.3f%% (<= 0.1%%), int|k| err %.3f%% (<= 0.5%%), slack %.3f; "
                "solved-map min slack %.3f (>= 0)",
                100 * l_err, 100 * k_err, rep.slack, min_slack));
}

void criterion8_isoperimetric() {
  // (a) p=2 log-radial annulus: (ln L)'' ~ 0
  auto ga = annulus(1, 2, 2.2, 385);
  auto fam2 = map_scalar(analytic_from_radial_scalar(scalar_radial(2.0, 1.0, 0.0)));
  auto sol2 = solve_tracked("iso-p2-log", fam2, ga, 2.0, newton(1e-9, 0.0));
  IsoOptions opts2;
  opts2.expect_radial_equality = true;
  for (double s = 0.2; s < 0.51; s += 0.05) opts2.s_samples.push_back(s);
  auto res2 = check_isoperimetric(sol2, stencil_jets(sol2),
                                  RegionSpec{RegionSpec::Kind::LevelBand, 0.15, 0.55}, opts2);
  double worst_ln = 0;
  for (const auto& row : res2.details.at("samples"))
    worst_ln = std::max(worst_ln, std::fabs(row.at("lnL_second").get<double>()));
  const bool a_ok = res2.verdict == Verdict::Holds && worst_ln <= 1e-3;

  // (b) p=3, u1 == u2 radial: (L')^2/L = 2 L'' within 1%
  auto fam3 = map_duplicated(analytic_from_radial_scalar(scalar_radial(3.0, 1.0, 0.0)));
  auto gb = annulus(1, 2, 2.2, 257);
  auto sol3 = solve_tracked("iso-p3-dup", fam3, gb, 3.0, newton());
  IsoOptions opts3;
  opts3.expect_radial_equality = true;
  for (double s = 1.08; s < 1.33; s += 0.04) opts3.s_samples.push_back(s);
  auto res3 = check_isoperimetric(sol3, stencil_jets(sol3),
                                  RegionSpec{RegionSpec::Kind::LevelBand, 1.04, 1.38}, opts3);
  double worst_eq = 0;
  for (const auto& row : res3.details.at("samples")) {
    const double lhs = row.at("equality_lhs").get<double>();
    const double rhs = row.at("equality_rhs").get<double>();
    worst_eq = std::max(worst_eq, std::fabs(lhs - rhs) / std::fabs(rhs));
  }
  const bool b_ok = res3.verdict == Verdict::Holds && worst_eq <= 0.01;

  // (c) generic p=3: nonnegative slack in the constant-free inequality
  AnalyticMap famg;
  famg.u1 = analytic_ramp_r(1.0, 2.0);
  famg.u2 = analytic_quadratic({0, 1, 0, 0, 0.3, 0});
  auto gc = annulus(1, 2, 2.2, 129);
  auto solg = solve_tracked("iso-p3-generic", famg, gc, 3.0, newton());
  IsoOptions optsg;
  for (double s = 0.3; s < 0.71; s += 0.08) optsg.s_samples.push_back(s);
  auto resg = check_isoperimetric(solg, stencil_jets(solg),
                                  RegionSpec{RegionSpec::Kind::LevelBand, 0.25, 0.78}, optsg);
  double min_slack = 1e300;
  for (const auto& row : resg.details.at("samples"))
    min_slack = std::min(min_slack, row.at("slack").get<double>());
  const bool c_ok = resg.verdict == Verdict::Holds && min_slack >= 0;

  criterion(8, "isoperimetric-suite", a_ok && b_ok && c_ok,
            fmt("p=2: max|(lnL)''| %.2e (<= 1e-3); p=3 radial: equality err %.3f%% (<= 1%%); "
                "p=3 generic: min slack %.4f (>= 0)",
                worst_ln, 100 * worst_eq, min_slack));
}

void criterion9_max_principle() {
  bool ok = true;
  double worst = 1e300;
  int n = 0;
  for (const auto& s : g_solves) {
    if (!s.report.converged) continue;
    ++n;
    auto res = check_max_principle(s.map, 10 * s.grad_tol);
    ok = ok && res.verdict == Verdict::Holds;
    worst = std::min(worst, res.details.at("min_margin").get<double>());
  }
  criterion(9, "max-principle", ok && n >= 10,
            fmt("%d converged solves, min margin %.3e (>= -10*grad_tol)", n, worst));
}

void criterion10_holder_integrability(const PlanarMap& radial_sol, const PlanarMap& harmonic_sol) {
  // (k-lemma-holder) on the test maps
  bool holder_ok = true;
  {
    auto jets = stencil_jets(radial_sol);
    auto r1 = check_kphi_integrability(radial_sol, jets, 1.5, 0, 0.45, 1.6, 1e-3);
    holder_ok = holder_ok && r1.verdict == Verdict::Holds;
    auto hj = stencil_jets(harmonic_sol);
    auto r2 = check_kphi_integrability(harmonic_sol, hj, 0.6, 0.6, 0.3, 0.2, 1e-3);
    holder_ok = holder_ok && r2.verdict == Verdict::Holds;
    auto g3 = make_grid(RectSpec{0, 1, 0, 1}, 65, 65);
    auto ua = sample_map(map_identity(), g3, 2.0);
    auto r3 = check_kphi_integrability(ua, analytic_jets(map_identity(), g3), 0.5, 0.5, 0.3, 0.5);
    holder_ok = holder_ok && r3.verdict == Verdict::Holds;
  }

  // (conv-est) and (qr-coeff) node-wise with a 10x stencil-scale tolerance
  double worst_conv = -1e300, worst_qr = -1e300;
  auto nodewise = [&](const PlanarMap& m) {
    const double S = 10 * (jet_error_scale(m.u1) + jet_error_scale(m.u2));
    const auto jets = stencil_jets(m);
    const auto fj = complex_jet(jets.j1);
    const auto gj = complex_jet(jets.j2);
    const double cap = 16 * entry_bound(m.p) * entry_bound(m.p);
    const double twoAp = 2 * entry_bound(m.p);
    for (std::size_t k = 0; k < fj.f.size(); ++k) {
      if (!fj.defined[k] || !gj.defined[k]) continue;
      if (std::abs(fj.f[k]) < 1e-8 || std::abs(gj.f[k]) < 1e-8) continue;
      const double afz = std::abs(fj.fz[k]), agz = std::abs(gj.fz[k]);
      const double afzb = std::abs(fj.fzb[k]), agzb = std::abs(gj.fzb[k]);
      const double amp = afz + agz + afzb + agzb + S;
      const double conv = (afzb * afzb + agzb * agzb) - cap * (afz * afz + agz * agz);
      worst_conv = std::max(worst_conv, conv - S * amp);
      const double qr = std::max(afzb, agzb) - twoAp * (afz + agz);
      worst_qr = std::max(worst_qr, qr - S);
    }
  };
  nodewise(radial_sol);
  nodewise(harmonic_sol);
  criterion(10, "holder-integrability", holder_ok && worst_conv <= 0 && worst_qr <= 0,
            fmt("Holder holds on 3 maps: %s; conv-est excess %.2e, qr-coeff excess %.2e "
                "(both <= 0 at 10x stencil scale)",
                holder_ok ? "yes" : "no", worst_conv, worst_qr));
}

void criterion11_determinism() {
  const fs::path base = fs::temp_directory_path() / "pharmap_acc_det";
  fs::remove_all(base);
  fs::create_directories(base);
  const std::string cfg_text = R"([domain]
shape = annulus
r_inner = 1
r_outer = 2
x_min = -2
x_max = 2
y_min = -2
y_max = 2
nx = 65
ny = 65

[problem]
p = 3

[boundary]
family = radial-profile
r0 = 0.95
r1 = 2.05
H0 = 1
H0p = 0.4

[solver]
method = damped-newton
grad_tol = 1e-8

[analyze]
levels = 1.2,1.5,1.8
length_samples = 1.1,1.2,1.3,1.4,1.5,1.6,1.7

[check]
checks = max-principle
[output]
dir = OUT
seed = 42
)";
  auto run_pipeline = [&](const std::string& tag, const std::string& extra) {
    const fs::path out = base / tag;
    std::string text = cfg_text;
    text.replace(text.find("OUT"), 3, out.string());
    const fs::path cfgp = base / (tag + ".cfg");
    std::ofstream(cfgp) << text;
    bool ok = run_cli("solve --config " + cfgp.string() + extra) == 0;
    ok = ok && run_cli("analyze --config " + cfgp.string() + " --artifact " + out.string() +
                       extra) == 0;
    ok = ok && run_cli("check --config " + cfgp.string() + " --artifact " + out.string() +
                       extra) == 0;
    return ok;
  };
  bool ok = run_pipeline("a", " --threads 1") && run_pipeline("b", " --threads 1") &&
            run_pipeline("c", " --threads 4");
  std::size_t files = 0;
  if (ok) {
    for (const auto& entry : fs::directory_iterator(base / "a")) {
      const auto name = entry.path().filename();
      const std::string a = slurp(base / "a" / name);
      if (a != slurp(base / "b" / name) || a != slurp(base / "c" / name)) {
        ok = false;
        std::printf("  !! artifact differs: %s\n", name.c_str());
      }
      ++files;
    }
  }
  criterion(11, "determinism", ok && files >= 10,
            fmt("%zu artifacts byte-identical across reruns and --threads 1 vs 4", files));
}

}  // namespace

int main() {
  std::printf("acceptance: planar p-harmonic laboratory\n");
  set_num_threads(1);

  const PlanarMap harmonic_sol = criterion1_harmonic_regression();

  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  PlanarMap radial_sol = criterion2_radial_consistency(prof);

  criterion3_matrix_certificate();
  CounterexampleResult ce = counterexample_map(12.0, 1.01, 385, 385);
  criterion4_theorem2_range(radial_sol, ce);
  criterion5_counterexample(ce);
  criterion6_curvature_agreement(radial_sol);
  criterion7_length_bound(radial_sol);
  criterion8_isoperimetric();
  criterion9_max_principle();
  criterion10_holder_integrability(radial_sol, harmonic_sol);
  criterion11_determinism();

  std::printf("%d of 11 criteria passed\n", 11 - g_failures);
  return g_failures;
}
