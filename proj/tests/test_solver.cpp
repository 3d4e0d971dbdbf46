#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/radial.hpp"
#include "pharmap/solver.hpp"

using namespace pharmap;
using namespace pharmap::test;

namespace {

SolveOptions newton_opts(double eps = 1e-8, double tol = 1e-9) {
  SolveOptions o;
  o.method = SolveMethod::DampedNewton;
  o.max_iters = 200;
  o.grad_tol = tol;
  o.epsilon_reg = eps;
  return o;
}

double max_map_error(const PlanarMap& got, const AnalyticMap& exact) {
  return std::max(max_abs_error(got.u1, exact.u1), max_abs_error(got.u2, exact.u2));
}

}  // namespace

TEST_CASE("energy: identity map on the unit square, p=2, eps=0 gives 2*area") {
  auto g = unit_square(33);
  auto u = sample_map(map_identity(), g, 2.0);
  CHECK(energy(u, 0.0) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("energy: affine map (2x, 0) at p=4 gives 16*area") {
  auto g = unit_square(21);
  auto u = sample_map(map_affine({0, 2, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0}), g, 4.0);
  CHECK(energy(u, 0.0) == doctest::Approx(16.0).epsilon(1e-10));
}

TEST_CASE("energy: (x^2 - y^2, 0) at p=2 converges to 8/3 at second order") {
  auto exact = 8.0 / 3.0;
  auto err = [&](int n) {
    auto g = unit_square(n);
    auto u = sample_map({analytic_quadratic({0, 0, 0, 1, 0, -1}), analytic_constant(0)}, g, 2.0);
    return std::fabs(energy(u, 0.0) - exact);
  };
  const double e1 = err(33), e2 = err(65);
  CHECK(e1 < 5e-3);
  CHECK(e1 / e2 > 3.0);
}

TEST_CASE("solve_dirichlet: identity boundary reproduces the identity map") {
  for (double p : {1.5, 2.0, 3.0}) {
    auto g = unit_square(25);
    auto bnd = sample_map(map_identity(), g, p);
    SolveReport rep;
    auto sol = solve_dirichlet(bnd, newton_opts(1e-10), rep);
    CHECK(rep.converged);
    CHECK(max_map_error(sol, map_identity()) < 1e-8);
  }
}

TEST_CASE("solve_dirichlet: p=2 harmonic pair is a discrete-exact solution") {
  auto g = unit_square(33);
  auto bnd = sample_map(map_harmonic_quad(1.0), g, 2.0);
  SolveReport rep;
  auto sol = solve_dirichlet(bnd, newton_opts(0.0, 1e-11), rep);
  CHECK(rep.converged);
  CHECK(max_map_error(sol, map_harmonic_quad(1.0)) < 1e-8);
}

TEST_CASE("solve_dirichlet: p=3 annulus with radial boundary matches the ODE profile") {
  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  auto g = annulus_grid(1, 2, 2, 65);
  auto bnd = sample_map(map_radial(prof), g, 3.0);
  SolveReport rep;
  auto sol = solve_dirichlet(bnd, newton_opts(1e-8, 1e-9), rep);
  CHECK(rep.converged);

  for (double r_target : {1.25, 1.5, 1.75}) {
    double worst = 0;
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
    CHECK(worst < 0.01);
  }
}

TEST_CASE("solve_dirichlet: gradient descent also reaches the minimizer") {
  auto g = unit_square(17);
  auto bnd = sample_map(map_harmonic_quad(1.0), g, 2.0);
  SolveOptions o;
  o.method = SolveMethod::GradientDescent;
  o.max_iters = 20000;
  o.grad_tol = 1e-7;
  o.epsilon_reg = 0.0;
  SolveReport rep;
  auto sol = solve_dirichlet(bnd, o, rep);
  CHECK(rep.converged);
  CHECK(max_map_error(sol, map_harmonic_quad(1.0)) < 1e-5);
}

TEST_CASE("solve_dirichlet: rejects p <= 1 and reports non-convergence") {
  auto g = unit_square(9);
  CHECK_THROWS_AS(sample_map(map_identity(), g, 0.5), std::invalid_argument);

  auto bnd = sample_map(map_harmonic_quad(1.0), g, 3.0);
  SolveOptions o;
  o.method = SolveMethod::GradientDescent;
  o.max_iters = 2;
  o.grad_tol = 1e-14;
  SolveReport rep;
  CHECK_NOTHROW(solve_dirichlet(bnd, o, rep));
  CHECK_FALSE(rep.converged);
}

TEST_CASE("solve invariant: accepted line-search steps strictly decrease the energy") {
  auto g = unit_square(17);
  auto bnd = sample_map(map_harmonic_quad(1.0), g, 2.5);
  SolveReport rep;
  solve_dirichlet(bnd, newton_opts(1e-6, 1e-9), rep);
  REQUIRE(rep.energy_history.size() > 1);
  REQUIRE(!rep.accepted_decreases.empty());
  for (double de : rep.accepted_decreases) CHECK(de > 0.0);  // strict decrease per step
  for (std::size_t k = 1; k < rep.energy_history.size(); ++k) {
    const auto& [stage_prev, e_prev] = rep.energy_history[k - 1];
    const auto& [stage, e] = rep.energy_history[k];
    if (stage == stage_prev) CHECK(e <= e_prev);
  }
}

TEST_CASE("solve invariant: the system is homogeneous of degree p-1") {
  auto g = unit_square(21);
  const double lambda = 2.5;
  for (double p : {1.7, 3.0}) {
    auto bnd = sample_map(map_harmonic_quad(1.0), g, p);
    auto bnd_scaled = sample_map(map_harmonic_quad(lambda), g, p);
    SolveReport r1, r2;
    auto o = newton_opts(1e-10, 1e-11);
    auto sol = solve_dirichlet(bnd, o, r1);
    auto sol_scaled = solve_dirichlet(bnd_scaled, o, r2);
    double worst = 0;
    for (std::size_t k = 0; k < g->size(); ++k) {
      const double a = sol.u1.values()[k], b = sol_scaled.u1.values()[k];
      if (!std::isfinite(a) || !std::isfinite(b)) continue;
      worst = std::max(worst, std::fabs(lambda * a - b));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("solve invariant: u2 = 0 boundary stays zero and u1 solves the scalar problem") {
  auto g = annulus_grid(1, 2, 2, 33);
  auto rs = scalar_radial(3.0, 1.0, 0.0);
  auto bnd = sample_map(map_scalar(analytic_from_radial_scalar(rs)), g, 3.0);
  SolveReport rep;
  auto sol = solve_dirichlet(bnd, newton_opts(1e-8, 1e-8), rep);
  CHECK(rep.converged);
  CHECK(max_finite(sol.u2) < 1e-10);
  auto lp = scalar_p_laplacian(sol.u1, 3.0);
  CHECK(rms_finite(lp.values()) < 0.05);
}

TEST_CASE("residual_divergence: identity map vanishes; scalar case matches lap_p") {
  auto g = unit_square(25);
  for (double p : {1.5, 2.0, 4.0}) {
    auto u = sample_map(map_identity(), g, p);
    auto [r1, r2] = residual_divergence(u);
    CHECK(max_finite(r1) < 1e-10);
    CHECK(max_finite(r2) < 1e-10);
  }

  auto g2 = square(1, 33);
  auto u = sample_map({analytic_quadratic({0, 0, 0, 1, 0, -1}), analytic_constant(0)}, g2, 3.0);
  auto [r1, r2] = residual_divergence(u);
  auto lp = scalar_p_laplacian(u.u1, 3.0);
  const auto d = max_diff(r1, lp);
  CHECK(d.nodes > 0);
  CHECK(d.max_abs < 1e-10);
  CHECK(max_finite(r2) < 1e-12);
}

TEST_CASE("residual_divergence: duplicated radial scalar is p-harmonic as a map") {
  auto g = annulus_grid(1, 2, 2, 65);
  auto rs = scalar_radial(3.0, 1.0, 0.0);
  auto u = sample_map(map_duplicated(analytic_from_radial_scalar(rs)), g, 3.0);
  auto [r1, r2] = residual_divergence(u);
  const double e65 = rms_finite(r1.values());
  CHECK(e65 < 5e-3);
  auto g2 = annulus_grid(1, 2, 2, 129);
  auto u2 = sample_map(map_duplicated(analytic_from_radial_scalar(rs)), g2, 3.0);
  auto [r1b, r2b] = residual_divergence(u2);
  CHECK(e65 / rms_finite(r1b.values()) > 2.5);  // ~O(h^2)
}

TEST_CASE("residual_gradrep: vanishes on the identity and on radial maps, p=5") {
  auto g = unit_square(25);
  auto u = sample_map(map_identity(), g, 5.0);
  auto [r1, r2] = residual_gradrep(stencil_jets(u), 5.0);
  CHECK(max_finite(r1) < 1e-10);
  CHECK(max_finite(r2) < 1e-10);

  auto prof = integrate_radial_auto(5.0, 0.95, 2.05, 1.0, 0.3);
  auto ga = annulus_grid(1, 2, 2, 65);
  auto ur = sample_map(map_radial(prof), ga, 5.0);
  auto [g1, g2] = residual_gradrep(stencil_jets(ur), 5.0);
  const double e65 = rms_finite(g1.values());
  auto gb = annulus_grid(1, 2, 2, 129);
  auto ur2 = sample_map(map_radial(prof), gb, 5.0);
  auto [g1b, g2b] = residual_gradrep(stencil_jets(ur2), 5.0);
  CHECK(e65 < 0.1);
  CHECK(e65 / rms_finite(g1b.values()) > 2.5);
}

TEST_CASE("residual_gradrep: small on a converged solve with nonvanishing gradients") {
  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  auto g = annulus_grid(1, 2, 2, 65);
  auto bnd = sample_map(map_radial(prof), g, 3.0);
  SolveReport rep;
  auto sol = solve_dirichlet(bnd, newton_opts(1e-8, 1e-9), rep);
  REQUIRE(rep.converged);
  auto [r1, r2] = residual_gradrep(stencil_jets(sol), 3.0);
  CHECK(rms_finite(r1.values()) < 0.1);  // C (h^2 + grad_tol) at h = 1/16
  CHECK(rms_finite(r2.values()) < 0.1);
}

TEST_CASE("equivalence: gradrep equals |Du|^{4-p} times the divergence form") {
  auto g = annulus_grid(1, 2, 2, 49);
  auto prof = integrate_radial_auto(3.5, 0.95, 2.05, 1.0, 0.4);
  auto u = sample_map(map_radial(prof), g, 3.5);
  const auto jets = stencil_jets(u);
  auto [d1, d2] = residual_divergence(jets, 3.5);
  auto [e1, e2] = residual_gradrep(jets, 3.5);
  for (std::size_t k = 0; k < g->size(); ++k) {
    if (!jets.j1.defined[k]) continue;
    const double m1 = std::hypot(jets.j1.ux[k], jets.j1.uy[k]);
    const double m2 = std::hypot(jets.j2.ux[k], jets.j2.uy[k]);
    if (m1 < 0.1 || m2 < 0.1) continue;
    const double q = m1 * m1 + m2 * m2;
    const double lhs = e1.values()[k];
    const double rhs = std::pow(q, (4 - 3.5) / 2) * d1.values()[k];
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) continue;
    CHECK(std::fabs(lhs - rhs) <= 1e-8 * std::max(1.0, std::fabs(rhs)));
  }
}

TEST_CASE("scalar_p_laplacian: affine kills it; x^2+y^2 at p=4 gives 32 r^2") {
  auto g = square(1, 21);
  auto ja = analytic_jet(analytic_affine(1, 0, 0), g);
  CHECK(max_finite(scalar_p_laplacian(ja, 3.0)) == 0.0);

  auto u = sample(analytic_radial_square(), g);
  auto lp = scalar_p_laplacian(u, 4.0);
  for (int j = 1; j < g->ny() - 1; ++j)
    for (int i = 1; i < g->nx() - 1; ++i) {
      const double r2 = g->x(i) * g->x(i) + g->y(j) * g->y(j);
      CHECK(lp.at(i, j) == doctest::Approx(32 * r2).epsilon(1e-9));
    }
}

TEST_CASE("scalar_p_laplacian: real and complex forms agree to 1e-9 relative") {
  auto g = square(2, 41);
  ScalarField u(g);
  for (int j = 0; j < g->ny(); ++j)
    for (int i = 0; i < g->nx(); ++i)
      u.at(i, j) = std::sin(g->x(i)) * std::cos(g->y(j)) + 0.5 * g->x(i);
  const auto jet = stencil_jet(u);
  for (double p : {1.3, 2.0, 2.7, 5.0}) {
    auto real_form = scalar_p_laplacian(jet, p, PLaplaceForm::Real);
    auto cplx_form = scalar_p_laplacian(jet, p, PLaplaceForm::Complex);
    for (std::size_t k = 0; k < g->size(); ++k) {
      if (!jet.defined[k]) continue;
      if (std::hypot(jet.ux[k], jet.uy[k]) <= 0.1) continue;
      const double a = real_form.values()[k], b = cplx_form.values()[k];
      CHECK(std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(a)));
    }
  }
}

TEST_CASE("solve determinism: identical bits across thread counts") {
  auto g = annulus_grid(1, 2, 2, 49);
  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  auto bnd = sample_map(map_radial(prof), g, 3.0);
  SolveReport r1, r4;
  set_num_threads(1);
  auto s1 = solve_dirichlet(bnd, newton_opts(), r1);
  set_num_threads(4);
  auto s4 = solve_dirichlet(bnd, newton_opts(), r4);
  set_num_threads(1);
  for (std::size_t k = 0; k < g->size(); ++k) {
    const double a = s1.u1.values()[k], b = s4.u1.values()[k];
    if (std::isfinite(a) || std::isfinite(b)) CHECK(a == b);
  }
  CHECK(r1.energy == r4.energy);
}
