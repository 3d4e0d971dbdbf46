#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pharmap/radial.hpp"
#include "pharmap/solver.hpp"
#include "pharmap/verify.hpp"

using namespace pharmap;
using namespace pharmap::test;

namespace {

PlanarMap solve_family(const AnalyticMap& fam, const GridPtr& g, double p, SolveReport& rep,
                       double tol = 1e-8) {
  SolveOptions o;
  o.method = SolveMethod::DampedNewton;
  o.grad_tol = tol;
  SolveReport r;
  auto sol = solve_dirichlet(sample_map(fam, g, p), o, r);
  rep = r;
  return sol;
}

}  // namespace

TEST_CASE("check_hessian_sign: identity map sits on the boundary case") {
  auto g = unit_square(33);
  auto u = sample_map(map_identity(), g, 2.0);
  auto res = check_hessian_sign(u, stencil_jets(u));
  CHECK(res.verdict == Verdict::Holds);
  CHECK(res.details.at("quantitative_ok").get<bool>());
}

TEST_CASE("check_hessian_sign: p=2 harmonic pair, hypothesis vacuous, bound tight") {
  auto g = unit_square(33);
  auto u = sample_map(map_harmonic_quad(1.0), g, 2.0);
  auto jets = analytic_jets(map_harmonic_quad(1.0), g);
  auto res = check_hessian_sign(u, jets);
  CHECK(res.verdict == Verdict::Holds);
  // det H(u2) = -4 < 0 everywhere: no hypothesis nodes
  CHECK(res.details.at("hypothesis_nodes").get<std::size_t>() == 0);
  // the quantitative inequality is an equality here: det H(u1) = -4|f_z|^2
  CHECK(res.details.at("quantitative_ok").get<bool>());
  CHECK(res.details.at("max_quantitative_violation").get<double>() <= 1e-12);
}

TEST_CASE("check_hessian_sign: holds on solved maps across the admissible range") {
  const double hi = 2 + std::sqrt(2.0);
  for (double p : {4.0 / 3.0, 1.6, 2.0, 2.5, hi}) {
    auto g = unit_square(33);
    SolveReport rep;
    auto sol = solve_family(map_harmonic_quad(1.0), g, p, rep);
    REQUIRE(rep.converged);
    auto res = check_hessian_sign(sol, stencil_jets(sol));
    CHECK(res.verdict == Verdict::Holds);
  }
  // radial maps at in-range p never activate the hypothesis (det H(u2) > 0
  // near the axis needs t^2 + (p-2)t + 1 < 0, impossible for p <= 4), so the
  // in-range content is the quantitative bound; the sign check stays vacuous
  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  auto ga = annulus_grid(1, 2, 2, 65);
  SolveReport rep;
  auto sol = solve_family(map_radial(prof), ga, 3.0, rep);
  REQUIRE(rep.converged);
  auto res = check_hessian_sign(sol, stencil_jets(sol));
  CHECK(res.verdict == Verdict::Holds);
  CHECK(res.details.at("quantitative_ok").get<bool>());
}

TEST_CASE("check_hessian_sign: the p=12 sector map violates the sign relation") {
  auto ce = counterexample_map(12.0, 1.01, 385, 385);
  REQUIRE(ce.both_nonnegative);
  auto am = map_radial(ce.profile);
  auto jets = analytic_jets(am, ce.sector);
  auto res = check_hessian_sign(ce.map, jets, ce.tol);
  CHECK(res.details.at("hypothesis_nodes").get<std::size_t>() > 0);
  CHECK(res.verdict == Verdict::Violated);
  REQUIRE(res.witness.has_value());
  CHECK(res.witness->value > 0);  // det H(u1) > 0 where det H(u2) >= 0
  // the unconditional quantitative bound still holds (16Ap^2 > 1 out of range)
  CHECK(res.details.at("max_quantitative_violation").get<double>() <= res.tolerance);
  CHECK_FALSE(res.details.at("p_in_range").get<bool>());
}

TEST_CASE("check_max_principle: identity and solved maps") {
  auto g = unit_square(33);
  auto u = sample_map(map_identity(), g, 2.0);
  auto res = check_max_principle(u, 1e-10);
  CHECK(res.verdict == Verdict::Holds);

  for (double p : {1.6, 2.0, 3.0}) {
    SolveReport rep;
    auto sol = solve_family(map_harmonic_quad(1.0), g, p, rep, 1e-8);
    REQUIRE(rep.converged);
    auto r = check_max_principle(sol, 10 * 1e-8);
    CHECK(r.verdict == Verdict::Holds);
  }

  // a fabricated interior bump is flagged with a witness
  auto bad = sample_map(map_identity(), g, 2.0);
  bad.u1.at(16, 16) = 100.0;
  auto r = check_max_principle(bad, 1e-6);
  CHECK(r.verdict == Verdict::Violated);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->i == 16);
  CHECK(r.witness->value == 100.0);
}

TEST_CASE("check_isoperimetric: p=2 log-radial annulus run has (ln L)'' ~ 0") {
  auto g = annulus_grid(1, 2, 2.2, 257);
  auto fam = map_scalar(analytic_from_radial_scalar(scalar_radial(2.0, 1.0, 0.0)));
  SolveReport rep;
  auto sol = solve_family(fam, g, 2.0, rep, 1e-9);
  REQUIRE(rep.converged);
  IsoOptions opts;
  opts.expect_radial_equality = true;
  for (double s = 0.2; s < 0.51; s += 0.05) opts.s_samples.push_back(s);
  auto res = check_isoperimetric(sol, stencil_jets(sol), RegionSpec{RegionSpec::Kind::LevelBand, 0.15, 0.55}, opts);
  INFO(res.details.dump(1));
  CHECK(res.verdict == Verdict::Holds);
  for (const auto& row : res.details.at("samples"))
    CHECK(std::fabs(row.at("lnL_second").get<double>()) <= 1e-3);
  CHECK(res.details.at("uhlenbeck_ratio").get<double>() > 0);
}

TEST_CASE("check_isoperimetric: p=3 duplicated radial run hits the equality case") {
  auto g = annulus_grid(1, 2, 2.2, 257);
  auto fam = map_duplicated(analytic_from_radial_scalar(scalar_radial(3.0, 1.0, 0.0)));
  SolveReport rep;
  auto sol = solve_family(fam, g, 3.0, rep, 1e-8);
  REQUIRE(rep.converged);
  IsoOptions opts;
  opts.expect_radial_equality = true;
  // u1 = r^{1/2} in (1, 1.414); keep levels well inside
  for (double s = 1.08; s < 1.33; s += 0.04) opts.s_samples.push_back(s);
  auto res = check_isoperimetric(sol, stencil_jets(sol), RegionSpec{RegionSpec::Kind::LevelBand, 1.04, 1.38}, opts);
  INFO(res.details.dump(1));
  CHECK(res.verdict == Verdict::Holds);
  for (const auto& row : res.details.at("samples")) {
    const double lhs = row.at("equality_lhs").get<double>();
    const double rhs = row.at("equality_rhs").get<double>();
    CHECK(std::fabs(lhs - rhs) <= 0.01 * std::fabs(rhs));
    CHECK(row.at("slack").get<double>() >= 0.0);
  }
}

TEST_CASE("check_isoperimetric: generic p=3 run keeps nonnegative slack") {
  auto g = annulus_grid(1, 2, 2.2, 129);
  AnalyticMap fam;
  fam.u1 = analytic_ramp_r(1.0, 2.0);
  fam.u2 = analytic_quadratic({0, 1, 0, 0, 0.3, 0});
  SolveReport rep;
  auto sol = solve_family(fam, g, 3.0, rep, 1e-8);
  REQUIRE(rep.converged);
  IsoOptions opts;
  for (double s = 0.3; s < 0.71; s += 0.08) opts.s_samples.push_back(s);
  auto res = check_isoperimetric(sol, stencil_jets(sol), RegionSpec{RegionSpec::Kind::LevelBand, 0.25, 0.78}, opts);
  INFO(res.details.dump(1));
  CHECK(res.verdict == Verdict::Holds);
  for (const auto& row : res.details.at("samples"))
    CHECK(row.at("slack").get<double>() >= 0.0);
}

TEST_CASE("check_isoperimetric: annulus region verifies boundary constancy") {
  auto g = annulus_grid(1, 2, 2.2, 257);
  auto fam = map_scalar(analytic_from_radial_scalar(scalar_radial(2.0, 1.0, 0.0)));
  SolveReport rep;
  auto sol = solve_family(fam, g, 2.0, rep, 1e-9);
  REQUIRE(rep.converged);
  IsoOptions opts;
  opts.expect_radial_equality = true;
  for (double s = 0.25; s < 0.51; s += 0.05) opts.s_samples.push_back(s);
  // log-radial data is constant on circles: the annulus region is accepted
  auto ok = check_isoperimetric(sol, stencil_jets(sol),
                                RegionSpec{RegionSpec::Kind::Annulus, 1.2, 1.8}, opts);
  CHECK(ok.verdict == Verdict::Holds);

  // harmonic-quad data varies along circles: premise fails, inconclusive
  auto bad_map = sample_map(map_harmonic_quad(1.0), g, 2.0);
  auto bad = check_isoperimetric(bad_map, stencil_jets(bad_map),
                                 RegionSpec{RegionSpec::Kind::Annulus, 1.2, 1.8}, opts);
  CHECK(bad.verdict == Verdict::Inconclusive);
  CHECK(bad.details.at("reason").get<std::string>().find("boundary component") !=
        std::string::npos);
}

TEST_CASE("check_isoperimetric: violated gradient bound is inconclusive") {
  auto g = square(1, 33);
  auto u = sample_map(map_harmonic_quad(1.0), g, 2.0);  // grad vanishes at the origin
  IsoOptions opts;
  opts.s_samples = {0.1};
  opts.grad_lower = 0.5;
  auto res = check_isoperimetric(u, stencil_jets(u), RegionSpec{RegionSpec::Kind::LevelBand, -0.2, 0.4}, opts);
  CHECK(res.verdict == Verdict::Inconclusive);
}

TEST_CASE("check_kphi_integrability: radial, affine, and harmonic cases") {
  // scalar radial p=3 on an annulus ball
  auto g = annulus_grid(1, 2, 2.2, 129);
  auto fam = map_scalar(analytic_from_radial_scalar(scalar_radial(3.0, 1.0, 0.0)));
  auto u = sample_map(fam, g, 3.0);
  auto jets = analytic_jets(fam, g);
  auto res = check_kphi_integrability(u, jets, 1.5, 0, 0.4, 0.2, 1e-3);
  CHECK(res.verdict == Verdict::Holds);
  CHECK(res.details.at("slack").get<double>() > 0);

  // affine: both sides vanish
  auto g2 = unit_square(33);
  auto ua = sample_map(map_identity(), g2, 2.0);
  auto ja = analytic_jets(map_identity(), g2);
  auto ra = check_kphi_integrability(ua, ja, 0.5, 0.5, 0.3, 0.5, 1e-3);
  CHECK(ra.verdict == Verdict::Holds);
  CHECK(ra.details.at("lhs").get<double>() <= 1e-12);

  // p=2 harmonic pair: A(2) = 1 (middle branch at p = 2)
  auto g3 = make_grid(RectSpec{0.2, 1.2, 0.2, 1.2}, 65, 65);
  auto uh = sample_map(map_harmonic_quad(1.0), g3, 2.0);
  auto jh = analytic_jets(map_harmonic_quad(1.0), g3);
  auto rh = check_kphi_integrability(uh, jh, 0.7, 0.7, 0.3, 0.3, 1e-3);
  CHECK(rh.verdict == Verdict::Holds);
  CHECK(rh.details.at("A_p").get<double>() == doctest::Approx(1.0));

  // un-certified |f| floor comes back inconclusive
  auto rx = check_kphi_integrability(uh, jh, 0.7, 0.7, 0.3, 0.3, 100.0);
  CHECK(rx.verdict == Verdict::Inconclusive);
}

TEST_CASE("checks are deterministic: identical JSON across repeated runs") {
  auto g = annulus_grid(1, 2, 2.2, 65);
  auto fam = map_scalar(analytic_from_radial_scalar(scalar_radial(2.0, 1.0, 0.0)));
  SolveReport rep;
  auto sol = solve_family(fam, g, 2.0, rep, 1e-8);
  IsoOptions opts;
  opts.s_samples = {0.25, 0.3, 0.35, 0.4};
  opts.expect_radial_equality = true;
  auto jets = stencil_jets(sol);
  const RegionSpec region{RegionSpec::Kind::LevelBand, 0.2, 0.5};
  auto r1 = check_isoperimetric(sol, jets, region, opts);
  auto r2 = check_isoperimetric(sol, jets, region, opts);
  CHECK(r1.to_json().dump() == r2.to_json().dump());

  auto h1 = check_hessian_sign(sol, jets);
  auto h2 = check_hessian_sign(sol, jets);
  CHECK(h1.to_json().dump() == h2.to_json().dump());
}

TEST_CASE("det_hessian_error_scale: roundoff floor on quadratics, h^2 on smooth") {
  auto g = square(1, 65);
  CHECK(det_hessian_error_scale(sample(analytic_radial_square(), g)) <= 1e-10);
  auto s65 = det_hessian_error_scale(sample(analytic_sin_cos(), g));
  auto g2 = square(1, 129);
  auto s129 = det_hessian_error_scale(sample(analytic_sin_cos(), g2));
  CHECK(s65 > 1e-6);
  CHECK(s65 / s129 > 2.5);
}
