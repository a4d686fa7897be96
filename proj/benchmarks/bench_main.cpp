#include <benchmark/benchmark.h>

#include "spinreg/lindblad.hpp"
#include "spinreg/spin_model.hpp"

using namespace spinreg;

// one transient of the driven register: dominates every scenario's runtime
static void BM_EvolveTwoTone(benchmark::State& state) {
  SpinSystemParams p = table1_params();
  p.n_th = 9.54e-3;
  const Mat8 h0 = build_rotating_hamiltonian(p, p.omega_S);
  DriveTone a, b;
  a.freq_offset_hz = -388e3;
  a.amplitude_hz = 32e3;
  b.freq_offset_hz = a.freq_offset_hz - 810e3;
  b.amplitude_hz = 32e3;
  const double window = static_cast<double>(state.range(0)) * 1e-6;
  a.duration_s = b.duration_s = window;
  const CollapseSet collapse = collapse_ops(p);
  const Mat8 rho0 = pure_level(0);
  for (auto _ : state) {
    auto traj = evolve(rho0, h0, {a, b}, collapse, 0.0, window, {});
    benchmark::DoNotOptimize(traj.final_state());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvolveTwoTone)->Arg(50)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

static void BM_FreeEvolutionWithCollapse(benchmark::State& state) {
  SpinSystemParams p = table1_params();
  const Mat8 h0 = build_rotating_hamiltonian(p, p.omega_S);
  const CollapseSet collapse = collapse_ops(p);
  const Mat8 rho0 = pure_level(4);
  for (auto _ : state) {
    auto traj = evolve(rho0, h0, {}, collapse, 0.0, 100e-6, {});
    benchmark::DoNotOptimize(traj.final_state());
  }
}
BENCHMARK(BM_FreeEvolutionWithCollapse)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
