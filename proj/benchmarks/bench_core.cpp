#include <benchmark/benchmark.h>

#include <cmath>

#include "memfv/elliptic.hpp"
#include "memfv/monitors.hpp"
#include "memfv/parabolic.hpp"

using namespace memfv;

namespace {

SimConfig bench_config(int n) {
  SimConfig cfg;
  cfg.mesh.dim = 1;
  cfg.mesh.n1 = n;
  cfg.mesh.n2 = n;
  cfg.species = {{1.0, 1.0}, {1.0, 1.0}};
  cfg.reaction = "annihilation";
  cfg.initial.resize(2);
  cfg.initial[0] = {"spike", 0.0, 1.0, 0.5, 0.0, 1};
  cfg.initial[1] = {"spike", 0.0, 1.0, 1.5, 0.0, 1};
  cfg.t_end = 1.0;
  cfg.dt = 1.0 / 256.0;
  cfg.monitors.key_estimate = false;
  return cfg;
}

void BM_AssembleInterval(benchmark::State& state) {
  const MembraneMesh mesh =
      build_interval_mesh(1.0, 1.0, state.range(0), state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble(mesh, Diffusion(1.0), 1.0));
}
BENCHMARK(BM_AssembleInterval)->Arg(128)->Arg(1024);

void BM_AssembleRect(benchmark::State& state) {
  const int n = state.range(0);
  const MembraneMesh mesh = build_rect_mesh(1.0, 1.0, 1.0, n, n, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble(mesh, Diffusion(1.0), 1.0));
}
BENCHMARK(BM_AssembleRect)->Arg(32)->Arg(64);

void BM_PoissonSolve(benchmark::State& state) {
  const int n = state.range(0);
  const MembraneMesh mesh = build_rect_mesh(1.0, 1.0, 1.0, n, n, n);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);
  Field rhs(op.n, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_poisson(op, rhs, 1e-10));
}
BENCHMARK(BM_PoissonSolve)->Arg(16)->Arg(32)->Arg(64);

void BM_DualNorm(benchmark::State& state) {
  const MembraneMesh mesh = build_interval_mesh(1.0, 1.0, 256, 256);
  const MembraneOperator op = assemble(mesh, Diffusion(1.0), 1.0);
  Field f(op.n);
  for (int i = 0; i < op.n; ++i) f[i] = std::sin(3.0 * mesh.cells[i].x);
  for (auto _ : state) benchmark::DoNotOptimize(dual_norm(op, f, 1e-10));
}
BENCHMARK(BM_DualNorm);

void BM_StepImex(benchmark::State& state) {
  SimConfig cfg = bench_config(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    Simulator sim(cfg);
    state.ResumeTiming();
    for (int s = 0; s < 16; ++s) sim.step();
  }
}
BENCHMARK(BM_StepImex)->Arg(64)->Arg(256);

void BM_Simulate(benchmark::State& state) {
  const SimConfig cfg = bench_config(64);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg));
}
BENCHMARK(BM_Simulate);

}  // namespace

BENCHMARK_MAIN();
