#include <benchmark/benchmark.h>

#include "pharmap/cgrad.hpp"
#include "pharmap/curvature.hpp"
#include "pharmap/families.hpp"
#include "pharmap/levelcurve.hpp"
#include "pharmap/numerics.hpp"
#include "pharmap/radial.hpp"
#include "pharmap/solver.hpp"

using namespace pharmap;

namespace {

GridPtr bench_annulus(int n) {
  return make_grid(AnnulusSpec{1, 2, RectSpec{-2, 2, -2, 2}}, n, n);
}

void BM_stencil_jet(benchmark::State& state) {
  auto g = make_grid(RectSpec{-2, 2, -2, 2}, state.range(0), state.range(0));
  auto u = sample(analytic_sin_cos(), g);
  for (auto _ : state) benchmark::DoNotOptimize(stencil_jet(u));
}
BENCHMARK(BM_stencil_jet)->Arg(129)->Arg(257)->Arg(513);

void BM_solve_newton_p2(benchmark::State& state) {
  auto g = make_grid(RectSpec{0, 1, 0, 1}, state.range(0), state.range(0));
  auto bnd = sample_map(map_harmonic_quad(1.0), g, 2.0);
  SolveOptions o;
  o.method = SolveMethod::DampedNewton;
  o.grad_tol = 1e-9;
  o.epsilon_reg = 0;
  for (auto _ : state) {
    SolveReport rep;
    benchmark::DoNotOptimize(solve_dirichlet(bnd, o, rep));
  }
}
BENCHMARK(BM_solve_newton_p2)->Arg(65)->Arg(129);

void BM_solve_newton_p3(benchmark::State& state) {
  auto prof = integrate_radial_auto(3.0, 0.95, 2.05, 1.0, 0.4);
  auto g = bench_annulus(state.range(0));
  auto bnd = sample_map(map_radial(prof), g, 3.0);
  SolveOptions o;
  o.method = SolveMethod::DampedNewton;
  o.grad_tol = 1e-8;
  for (auto _ : state) {
    SolveReport rep;
    benchmark::DoNotOptimize(solve_dirichlet(bnd, o, rep));
  }
}
BENCHMARK(BM_solve_newton_p3)->Arg(65)->Arg(129);

void BM_extract_level(benchmark::State& state) {
  auto g = make_grid(RectSpec{-3, 3, -3, 3}, state.range(0), state.range(0));
  auto u = sample(analytic_radial_square(), g);
  for (auto _ : state) benchmark::DoNotOptimize(extract_level(u, 4.0));
}
BENCHMARK(BM_extract_level)->Arg(257)->Arg(513);

void BM_coefficient_entry(benchmark::State& state) {
  Rng rng(1);
  std::vector<cplx> fs, gs;
  for (int k = 0; k < 1024; ++k) {
    fs.push_back(std::polar(rng.log_uniform(0.3, 30.0), rng.uniform(0, 6.28)));
    gs.push_back(std::polar(rng.log_uniform(0.3, 30.0), rng.uniform(0, 6.28)));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(coefficient_entry(fs[i & 1023], gs[i & 1023], 3.0));
    ++i;
  }
}
BENCHMARK(BM_coefficient_entry);

void BM_curvature_modes(benchmark::State& state) {
  auto g = make_grid(RectSpec{-2, 2, -2, 2}, 257, 257);
  auto jet = analytic_jet(analytic_sin_cos(), g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvature_k(jet, 3.0, KMode::Divergence));
    benchmark::DoNotOptimize(curvature_k(jet, 3.0, KMode::Complex));
  }
}
BENCHMARK(BM_curvature_modes);

void BM_radial_integration(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_radial(3.0, 0.95, 2.05, 1.0, 0.4, 1.0 / 1024));
}
BENCHMARK(BM_radial_integration);

}  // namespace

BENCHMARK_MAIN();
