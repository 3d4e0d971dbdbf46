#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "pharmap/cgrad.hpp"
#include "pharmap/curvature.hpp"
#include "pharmap/errors.hpp"
#include "pharmap/families.hpp"
#include "pharmap/field_io.hpp"
#include "pharmap/lengthfn.hpp"
#include "pharmap/levelcurve.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/radial.hpp"
#include "pharmap/solver.hpp"
#include "pharmap/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace pharmap::cli {

namespace {

std::string out_dir(const RunConfig& cfg, const CommonFlags& flags) {
  return flags.out_dir.empty() ? cfg.out_dir : flags.out_dir;
}

PlanarMap boundary_map(const RunConfig& cfg, const GridPtr& grid) {
  if (!cfg.boundary_csv.empty()) {
    if (!fs::exists(cfg.boundary_csv))
      throw ConfigError("boundary.csv: file '" + cfg.boundary_csv + "' does not exist");
    auto cols = read_fields_csv(cfg.boundary_csv, grid);
    const ScalarField* u1 = nullptr;
    const ScalarField* u2 = nullptr;
    for (const auto& [name, f] : cols) {
      if (name == "u1") u1 = &f;
      if (name == "u2") u2 = &f;
    }
    if (!u1 || !u2) throw ConfigError("boundary.csv: u1/u2 columns required");
    return PlanarMap(*u1, *u2, cfg.p);
  }
  auto param = [&](const std::string& key, double fallback) {
    auto it = cfg.boundary_params.find(key);
    return it == cfg.boundary_params.end() ? fallback : it->second;
  };
  return sample_map(family_by_name(cfg.boundary_family, param, cfg.p), grid, cfg.p);
}

struct SolvedRun {
  PlanarMap map;
  SolveReport report;
};

SolvedRun run_solve(const RunConfig& cfg) {
  auto grid = make_grid(cfg.domain, cfg.nx, cfg.ny);
  auto bnd = boundary_map(cfg, grid);
  SolvedRun r;
  r.map = solve_dirichlet(bnd, cfg.solve, r.report);
  return r;
}

json report_json(const RunConfig& cfg, const SolvedRun& run) {
  return json{{"equation", "div(|Du|^{p-2} grad u^i) = 0, i = 1, 2"},
              {"converged", run.report.converged},
              {"iterations", run.report.iterations},
              {"objective", run.report.energy},
              {"energy_nodal", energy(run.map, cfg.solve.epsilon_reg)},
              {"grad_norm", run.report.grad_norm},
              {"residual_u1", run.report.residual_u1},
              {"residual_u2", run.report.residual_u2},
              {"p", cfg.p},
              {"epsilon", cfg.solve.epsilon_reg},
              {"grad_tol", cfg.solve.grad_tol},
              {"method", cfg.solve.method == SolveMethod::DampedNewton ? "damped-newton"
                                                                       : "gradient-descent"},
              {"seed", cfg.seed}};
}

PlanarMap load_artifact(const std::string& dir) {
  for (const char* stem : {"solution", "counterexample_map"})
    if (fs::exists(fs::path(dir) / (std::string(stem) + ".csv"))) return read_map(dir, stem);
  throw ConfigError("artifact: no solution.csv or counterexample_map.csv under '" + dir + "'");
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const CommonFlags& flags) {
  const std::string dir = out_dir(cfg, flags);
  fs::create_directories(dir);
  auto run = run_solve(cfg);
  write_map(dir, "solution", run.map);
  std::ofstream((fs::path(dir) / "solve_report.json")) << report_json(cfg, run).dump(2) << "\n";
  if (!run.report.converged) {
    std::cerr << "solve: not converged within max_iters (grad_norm " << run.report.grad_norm
              << ")\n";
    return kNumericalFailure;
  }
  std::cout << "solve: converged in " << run.report.iterations << " iterations, objective "
            << run.report.energy << "\n";
  return kOk;
}

int cmd_analyze(const RunConfig& cfg, const CommonFlags& flags, const std::string& artifact_dir) {
  const std::string dir = out_dir(cfg, flags);
  fs::create_directories(dir);
  PlanarMap map = artifact_dir.empty() ? run_solve(cfg).map : load_artifact(artifact_dir);
  const double p = map.p;
  const auto jets = stencil_jets(map);
  const auto fj = complex_jet(jets.j1);
  const auto gj = complex_jet(jets.j2);

  // curvature / Hessian fields
  auto det1 = det_hessian(jets.j1);
  auto det2 = det_hessian(jets.j2);
  auto K1 = gauss_curvature(jets.j1);
  auto K2 = gauss_curvature(jets.j2);
  auto k1 = curvature_k(jets.j1, p, KMode::Divergence);
  auto h1 = curvature_h(jets.j1);
  write_fields_csv((fs::path(dir) / "fields.csv").string(),
                   {{"det_h_u1", &det1},
                    {"det_h_u2", &det2},
                    {"gauss_u1", &K1},
                    {"gauss_u2", &K2},
                    {"k_u1", &k1},
                    {"h_u1", &h1}},
                   "det H(u) = uxx uyy - uxy^2 = 4(|f_zbar|^2-|f_z|^2); "
                   "K = det H/(1+|grad u|^2)^2; k = -div(grad u/|grad u|); "
                   "h = ((uxx-uyy)ux uy - uxy(ux^2-uy^2))/|grad u|^3");

  // level curves of u1
  std::vector<LevelCurve> all;
  ScalarField gn(map.u1.grid_ptr());
  for (std::size_t k = 0; k < gn.values().size(); ++k)
    if (jets.j1.defined[k]) gn.values()[k] = std::hypot(jets.j1.ux[k], jets.j1.uy[k]);
  for (double s : cfg.levels) {
    auto curves = extract_level(map.u1, s);
    for (auto& c : curves) {
      attach_curve_samples(c, gn, k1);
      all.push_back(std::move(c));
    }
  }
  write_curves_csv((fs::path(dir) / "levels.csv").string(), all);
  write_curves_svg((fs::path(dir) / "levels.svg").string(), map.u1.grid(), all);

  // level-length function
  if (!cfg.length_samples.empty()) {
    auto lf = length_function(map.u1, jets.j1, p, cfg.length_samples, &jets);
    write_length_csv((fs::path(dir) / "length.csv").string(), lf);
  }

  // quasiregularity and matrix bounds
  auto qr = quasiregularity_report(fj, gj, p);
  write_fields_csv((fs::path(dir) / "qr_fields.csv").string(),
                   {{"mu_f", &qr.mu_f}, {"mu_g", &qr.mu_g}, {"ratio_gz_fz", &qr.ratio_gz_fz}},
                   "|mu| = |F_zbar|/|F_z| <= k < 1 marks quasiregularity; the ratio "
                   "|g_z|/|f_z| < (1-2Ap)/(2Ap) criterion certifies it");
  json qrj{{"equation", "|mu| = |F_zbar|/|F_z| <= k < 1"},
           {"p", qr.p},
           {"entry_bound", qr.a_bound},
           {"sup_mu_f", qr.sup_mu_f},
           {"sup_mu_g", qr.sup_mu_g},
           {"sup_ratio_gz_fz", qr.sup_ratio_gz_fz},
           {"sup_ratio_fz_gz", qr.sup_ratio_fz_gz},
           {"ratio_threshold", qr.ratio_threshold},
           {"ratio_threshold_printed", qr.ratio_threshold_printed},
           {"k_bound_f", qr.k_bound_f},
           {"k_bound_g", qr.k_bound_g},
           {"quasiregular_f", qr.quasiregular_f},
           {"quasiregular_g", qr.quasiregular_g},
           {"qr_coeff_max_violation", qr.qr_coeff_max_violation},
           {"nodes", qr.nodes}};
  std::ofstream((fs::path(dir) / "qr_report.json")) << qrj.dump(2) << "\n";

  auto f = complex_gradient(map.u1);
  auto gfield = complex_gradient(map.u2);
  auto cm = coefficient_matrix(f, gfield, p);
  double max_entry = 0, min_phi_margin = std::numeric_limits<double>::infinity();
  std::size_t defined = 0, singular = 0;
  for (std::size_t k = 0; k < cm.grid->size(); ++k) {
    if (map.u1.grid().mask()[k] == NodeState::Interior && !cm.defined[k]) ++singular;
    if (!cm.defined[k]) continue;
    ++defined;
    max_entry = std::max({max_entry, std::abs(cm.a11[k]), std::abs(cm.a12[k]),
                          std::abs(cm.a21[k]), std::abs(cm.a22[k])});
    const double fa = std::norm(f.values()[k]), ga = std::norm(gfield.values()[k]);
    const double bound = 16 * p + 8 * p * (fa / ga + ga / fa);
    min_phi_margin = std::min(min_phi_margin, cm.phi[k] - bound);
  }
  json bounds{{"equation", "A_p = max|A_ij(f,g)| piecewise in p; "
                           "|Phi| >= 16p + 8p(|f|^2/|g|^2 + |g|^2/|f|^2)"},
              {"p", p},
              {"entry_bound", entry_bound(p)},
              {"max_entry", max_entry},
              {"entry_margin", entry_bound(p) - max_entry},
              {"min_phi_margin", std::isfinite(min_phi_margin) ? min_phi_margin : 0.0},
              {"nodes_defined", defined},
              {"interior_nodes_singular", singular}};
  std::ofstream((fs::path(dir) / "matrix_bounds.json")) << bounds.dump(2) << "\n";

  json summary{{"p", p},
               {"singular_interior_nodes", singular},
               {"levels", cfg.levels},
               {"curves", all.size()},
               {"quasiregular_f", qr.quasiregular_f}};
  std::ofstream((fs::path(dir) / "analyze_summary.json")) << summary.dump(2) << "\n";
  std::cout << "analyze: " << all.size() << " level curves, " << singular
            << " masked-out or singular nodes\n";
  return kOk;
}

int cmd_check(const RunConfig& cfg, const CommonFlags& flags, const std::string& artifact_dir) {
  const std::string dir = out_dir(cfg, flags);
  fs::create_directories(dir);
  PlanarMap map;
  double grad_tol = cfg.solve.grad_tol;
  if (artifact_dir.empty()) {
    auto run = run_solve(cfg);
    if (!run.report.converged) {
      std::cerr << "check: solve did not converge; checks need a converged input\n";
      return kNumericalFailure;
    }
    map = std::move(run.map);
  } else {
    map = load_artifact(artifact_dir);
  }
  const auto jets = stencil_jets(map);

  std::vector<CheckResult> results;
  for (const auto& name : cfg.checks) {
    if (name == "hessian-sign") {
      const double tol = 10 * det_hessian_error_scale(map.u1) * flags.tolerance_scale;
      results.push_back(check_hessian_sign(map, jets, tol));
    } else if (name == "max-principle") {
      results.push_back(check_max_principle(map, 10 * grad_tol * flags.tolerance_scale));
    } else if (name == "isoperimetric") {
      IsoOptions opts;
      opts.s_samples = cfg.check_samples;
      opts.expect_radial_equality = cfg.radial_equality;
      opts.tol_scale = flags.tolerance_scale;
      RegionSpec region{cfg.region_kind == "annulus" ? RegionSpec::Kind::Annulus
                                                     : RegionSpec::Kind::LevelBand,
                        cfg.region_a, cfg.region_b};
      results.push_back(check_isoperimetric(map, jets, region, opts));
    } else if (name == "kphi-integrability") {
      results.push_back(
          check_kphi_integrability(map, jets, cfg.ball.cx, cfg.ball.cy, cfg.ball.R, cfg.ball.s));
    } else {
      throw ConfigError("check.checks: unknown check '" + name + "'");
    }
  }

  write_checks_json((fs::path(dir) / "checks.json").string(), results);
  print_checks_table(results);

  bool bad = false;
  for (const auto& r : results) {
    const bool whitelisted =
        std::find(cfg.whitelist.begin(), cfg.whitelist.end(), r.name) != cfg.whitelist.end();
    if (r.verdict == Verdict::Violated && !whitelisted) bad = true;
    if (r.verdict == Verdict::Inconclusive && !cfg.allow_inconclusive && !whitelisted) bad = true;
  }
  return bad ? kCheckViolation : kOk;
}

int cmd_radial(const RadialArgs& args, const CommonFlags& flags) {
  const std::string dir = flags.out_dir.empty() ? "out" : flags.out_dir;
  fs::create_directories(dir);

  if (args.mode == "admissible-interval") {
    auto iv = admissible_c_interval(args.p);
    json j{{"equation", "4(1-p)c^2 - 4pc + p(p-4) >= 0, aperture c > 1"},
           {"p", args.p},
           {"empty", iv.empty},
           {"c_low", iv.c_low},
           {"c_high", iv.c_high}};
    std::ofstream((fs::path(dir) / "interval.json")) << j.dump(2) << "\n";
    std::cout << "admissible c interval for p=" << args.p << ": "
              << (iv.empty ? "empty" : "(1, " + fmt_g17(iv.c_high) + "]") << "\n";
    return kOk;
  }

  if (args.mode == "profile") {
    auto prof = integrate_radial_auto(args.p, args.r0, args.r1, args.H0, args.H0p);
    std::ofstream out(fs::path(dir) / "radial_profile.csv");
    out << "# radial profile H(r) of u = (H(r)x, H(r)y); governing ODE: "
           "(p-1)H''(H')^2 r^3 + (2p-1)(H')^3 r^2 + 2(p-1)H H' H'' r^2 + (5p-4)H(H')^2 r"
           " + p H^2 H'' r + 3p H^2 H' = 0\n";
    out << "r,H,Hp,Hpp\n";
    for (std::size_t k = 0; k < prof.r.size(); ++k)
      out << fmt_g17(prof.r[k]) << "," << fmt_g17(prof.H[k]) << "," << fmt_g17(prof.Hp[k]) << ","
          << fmt_g17(prof.Hpp[k]) << "\n";
    std::cout << "profile: " << prof.r.size() << " samples on [" << prof.r_min() << ", "
              << prof.r_max() << "]\n";
    return kOk;
  }

  if (args.mode == "counterexample") {
    const double c = args.c.value_or(1.01);
    auto res = counterexample_map(args.p, c, args.resolution, args.resolution);
    write_map(dir, "counterexample_map", res.map);
    json j{{"equation", "(1+c(p-1))t^2 + (p-2)t + 1 + c <= 0, t = (H'r+H)/H; "
                        "det H(u1), det H(u2) >= 0 on {y^2 < x^2 < c y^2}"},
           {"p", res.spec.p},
           {"c", res.spec.c},
           {"t_minus", res.spec.t_minus},
           {"t_plus", res.spec.t_plus},
           {"t_star", res.spec.t_star},
           {"r_lo", res.spec.r_lo},
           {"r_hi", res.spec.r_hi},
           {"H0", res.spec.H0},
           {"H0p", res.spec.Hp0},
           {"min_det_h_u1", res.min_det_h1},
           {"min_det_h_u2", res.min_det_h2},
           {"tolerance", res.tol},
           {"both_nonnegative", res.both_nonnegative}};
    std::ofstream((fs::path(dir) / "counterexample.json")) << j.dump(2) << "\n";
    std::cout << "counterexample: min det H(u1) = " << res.min_det_h1 << ", min det H(u2) = "
              << res.min_det_h2 << " (tol " << res.tol << ")\n";
    return res.both_nonnegative ? kOk : kNumericalFailure;
  }

  throw ConfigError("radial --mode: expected profile | admissible-interval | counterexample");
}

int cmd_report(const CommonFlags& flags) {
  const std::string dir = flags.out_dir.empty() ? "out" : flags.out_dir;
  std::ostringstream out;
  auto append_json = [&](const char* file, const char* title) {
    const auto path = fs::path(dir) / file;
    if (!fs::exists(path)) return;
    std::ifstream in(path);
    json j;
    in >> j;
    out << "== " << title << " ==\n" << j.dump(2) << "\n\n";
  };
  append_json("solve_report.json", "solve");
  append_json("analyze_summary.json", "analyze");
  append_json("matrix_bounds.json", "coefficient matrix bounds");
  append_json("qr_report.json", "quasiregularity");
  append_json("checks.json", "checks");
  append_json("interval.json", "admissible aperture interval");
  append_json("counterexample.json", "radial counterexample");
  if (out.str().empty()) {
    std::cerr << "report: no artifacts under '" << dir << "'\n";
    return kUsageError;
  }
  std::ofstream((fs::path(dir) / "report.txt")) << out.str();
  std::cout << out.str();
  return kOk;
}

}  // namespace pharmap::cli
