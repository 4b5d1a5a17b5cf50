#include <algorithm>

#include <benchmark/benchmark.h>

#include "emacfem/forms.hpp"
#include "emacfem/problems.hpp"
#include "emacfem/sparse.hpp"

using namespace emacfem;

namespace {

// Newton matrix of one BDF1 step on a Gresho state, pressure dof 0 pinned.
SparseMatrix gresho_system(int n) {
  const auto spec = gresho();
  const auto mesh = problem_mesh(spec, n, std::nullopt);
  const auto vel = build_dof_map(mesh, SpaceKind::P2Vector, spec.velocity_bc);
  const auto pres = build_dof_map(mesh, SpaceKind::P1Scalar);
  const auto u = FemField::interpolate(vel, spec.initial_velocity);
  const int nv = vel->n_dofs();
  std::vector<Triplet> t;
  add_mass(t, *vel, 100.0);
  add_viscous(t, *vel, 1e-3);
  add_nonlinear_jacobian(t, NonlinearForm::EMAC, u);
  add_divergence_transpose(t, *vel, *pres, -1.0, {0, nv});
  add_divergence(t, *vel, *pres, -1.0, {nv, 0});
  std::erase_if(t, [nv](const Triplet& x) { return x.row == nv || x.col == nv; });
  t.push_back({nv, nv, 1.0});
  return SparseMatrix::from_triplets(nv + pres->n_dofs(), nv + pres->n_dofs(), t);
}

void BM_Factorize(benchmark::State& state) {
  const auto a = gresho_system(static_cast<int>(state.range(0)));
  LinearSolver solver;
  solver.factorize(a);
  for (auto _ : state) solver.factorize(a);
  state.counters["rows"] = a.rows();
  state.counters["nnz"] = static_cast<double>(a.values().size());
}

void BM_Solve(benchmark::State& state) {
  const auto a = gresho_system(static_cast<int>(state.range(0)));
  LinearSolver solver;
  solver.factorize(a);
  const std::vector<double> b(a.rows(), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(solver.solve(b));
}

}  // namespace

BENCHMARK(BM_Factorize)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
