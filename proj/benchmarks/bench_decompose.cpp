#include <benchmark/benchmark.h>

#include "grassfactor/decompose.hpp"
#include "grassfactor/random.hpp"
#include "grassfactor/symplectic.hpp"

using namespace grassfactor;

static void BM_DecomposeSO(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(1);
  RealMatrix z = haar_special_orthogonal(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose::decompose_so(z));
}
BENCHMARK(BM_DecomposeSO)->Arg(16)->Arg(64)->Arg(128);

static void BM_DecomposeSU(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(2);
  ComplexMatrix z = haar_special_unitary(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose::decompose_su(z));
}
BENCHMARK(BM_DecomposeSU)->Arg(16)->Arg(64);

static void BM_DecomposeSpFour(benchmark::State& state) {
  const int n = int(state.range(0));
  auto x = symplectic::sp_sample(Field::Complex, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(symplectic::decompose_sp_four(x));
}
BENCHMARK(BM_DecomposeSpFour)->Arg(3)->Arg(6);

static void BM_HaarOrthogonal(benchmark::State& state) {
  const int n = int(state.range(0));
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(haar_orthogonal(n, rng));
}
BENCHMARK(BM_HaarOrthogonal)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
