#include <benchmark/benchmark.h>

#include "emacfem/problems.hpp"
#include "emacfem/solver.hpp"

using namespace emacfem;

namespace {

void BM_GreshoStep(benchmark::State& state) {
  const auto spec = gresho();
  const auto mesh = problem_mesh(spec, static_cast<int>(state.range(0)), std::nullopt);
  const auto vel = build_dof_map(mesh, SpaceKind::P2Vector, spec.velocity_bc);
  const auto pres = build_dof_map(mesh, SpaceKind::P1Scalar);
  NseOptions o;
  o.form = static_cast<NonlinearForm>(state.range(1));
  o.nu = 1e-10;
  NseSolver solver(vel, pres, o);
  SolverHistory h;
  h.push(initial_state(vel, pres, spec.initial_velocity, 0.0));
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(h, 0.01, 1));
  state.SetLabel(to_string(o.form));
}

}  // namespace

BENCHMARK(BM_GreshoStep)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
