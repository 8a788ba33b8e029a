#include <benchmark/benchmark.h>

#include "cqverify/opalg.hpp"

using namespace cqverify;

static void BM_spectral(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Mat m = Mat::Random(d, d);
  Mat h = 0.5 * (m + m.adjoint().eval());
  h = 0.5 * (h + h.adjoint().eval());
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectral_decompose(h));
  }
}
BENCHMARK(BM_spectral)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
