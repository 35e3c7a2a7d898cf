#include <benchmark/benchmark.h>

#include "finsler/conformal_solver.hpp"

using namespace finsler;

namespace {

FinslerField randers_torus() {
  Vector b(2);
  b << 0.5, 0.0;
  return FinslerField::constant_norm(ManifoldModel::flat_torus(), MinkowskiNorm::randers(Matrix::Identity(2, 2), b));
}

void BM_AssembleTorus(benchmark::State& state) {
  const auto t = ManifoldModel::flat_torus();
  const auto basis = FieldBasis::torus_fourier(t, 2);
  const auto field = randers_torus();
  const auto colloc = make_collocation(t, static_cast<int>(state.range(0)), 8, 4, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(field, basis, colloc, SolveMode::Conformal));
  state.counters["rows"] = static_cast<double>(colloc.size());
}
BENCHMARK(BM_AssembleTorus)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SolveTorus(benchmark::State& state) {
  const auto basis = FieldBasis::torus_fourier(ManifoldModel::flat_torus(), 2);
  const auto field = randers_torus();
  SolverConfig cfg;
  cfg.grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_fields(field, basis, cfg).killing_dim);
}
BENCHMARK(BM_SolveTorus)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_SolveRoundSphere(benchmark::State& state) {
  const auto s = ManifoldModel::sphere2();
  const auto basis = FieldBasis::sphere_conformal(s, static_cast<int>(state.range(0)));
  const auto field = FinslerField::round_sphere(s);
  for (auto _ : state) benchmark::DoNotOptimize(solve_fields(field, basis).conformal_dim);
}
BENCHMARK(BM_SolveRoundSphere)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_NullSpace(benchmark::State& state) {
  const Matrix a = Matrix::Random(state.range(0) * 8, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(null_space(a).dimension);
}
BENCHMARK(BM_NullSpace)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
