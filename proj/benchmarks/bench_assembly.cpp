#include <benchmark/benchmark.h>

#include "emacfem/forms.hpp"
#include "emacfem/problems.hpp"

using namespace emacfem;

namespace {

FemField gresho_field(int n) {
  const auto spec = gresho();
  const auto mesh = problem_mesh(spec, n, std::nullopt);
  return FemField::interpolate(build_dof_map(mesh, SpaceKind::P2Vector, spec.velocity_bc), spec.initial_velocity);
}

void BM_NonlinearResidual(benchmark::State& state) {
  const auto u = gresho_field(static_cast<int>(state.range(0)));
  const auto form = static_cast<NonlinearForm>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(nonlinear_residual(form, u));
  state.SetLabel(to_string(form));
}

void BM_NonlinearJacobian(benchmark::State& state) {
  const auto u = gresho_field(static_cast<int>(state.range(0)));
  const auto form = static_cast<NonlinearForm>(state.range(1));
  std::vector<Triplet> out;
  for (auto _ : state) {
    out.clear();
    add_nonlinear_jacobian(out, form, u);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetLabel(to_string(form));
}

void BM_LinearBlocks(benchmark::State& state) {
  const auto u = gresho_field(static_cast<int>(state.range(0)));
  const auto pressure = build_dof_map(u.map->mesh_ptr(), SpaceKind::P1Scalar);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_mass(*u.map));
    benchmark::DoNotOptimize(assemble_viscous(*u.map, 1e-3));
    benchmark::DoNotOptimize(assemble_divergence(*u.map, *pressure));
  }
}

}  // namespace

BENCHMARK(BM_NonlinearResidual)->ArgsProduct({{32, 64}, {0, 1, 2, 3, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NonlinearJacobian)->ArgsProduct({{32, 64}, {0, 1, 2, 3, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LinearBlocks)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
