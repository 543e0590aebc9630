#include "oca/enumeration.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_SearchBipermutive(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oca::search_bipermutive(d));
}
BENCHMARK(BM_SearchBipermutive)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_EnumerateMaximalLinear(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oca::enumerate_maximal_linear(d));
}
BENCHMARK(BM_EnumerateMaximalLinear)->DenseRange(5, 10)->Unit(benchmark::kMillisecond);

}  // namespace
