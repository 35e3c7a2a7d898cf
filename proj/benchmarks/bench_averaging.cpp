#include <benchmark/benchmark.h>

#include "finsler/averaging.hpp"
#include "finsler/norm.hpp"

using namespace finsler;

namespace {

MinkowskiNorm randers2() {
  Vector b(2);
  b << 0.3, 0.1;
  return MinkowskiNorm::randers(Matrix::Identity(2, 2), b);
}

void BM_AveragedRanders(benchmark::State& state) {
  const auto n = randers2();
  const int res = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(averaged_norm(n, res).matrix);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AveragedRanders)->RangeMultiplier(4)->Range(64, 4096)->Complexity(benchmark::oN);

void BM_FundamentalTensor(benchmark::State& state) {
  const auto n = randers2();
  Vector y(2);
  y << 0.7, -1.2;
  TensorOptions opt;
  opt.scheme = state.range(0) == 0 ? DiffScheme::Analytic : DiffScheme::FiniteDifference;
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_tensor(n, y, opt).matrix);
}
BENCHMARK(BM_FundamentalTensor)->Arg(0)->Arg(1);

}  // namespace
