#include <benchmark/benchmark.h>

#include "vcsim/kernels.hpp"

using namespace vcsim;

namespace {

struct Operands {
  QMatrix w, x;
};

Operands make(int64_t n, int bw) {
  return {random_matrix(n, n, bw, true, 1), random_matrix(n, n, bw, false, 2)};
}

void BM_reference(benchmark::State& st) {
  const auto o = make(st.range(0), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(gemm_reference(o.w, o.x));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0) * st.range(0));
}

void BM_composed_serial(benchmark::State& st) {
  const auto o = make(st.range(0), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(gemm_composed_serial(o.w, o.x, {}));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0) * st.range(0));
}

void BM_composed_omp(benchmark::State& st) {
  const auto o = make(st.range(0), int(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(gemm_composed_omp(o.w, o.x, {}));
  st.SetItemsProcessed(st.iterations() * st.range(0) * st.range(0) * st.range(0));
}

void args(benchmark::internal::Benchmark* b) {
  for (int n : {64, 256})
    for (int bw : {2, 4, 8}) b->Args({n, bw});
}

}  // namespace

BENCHMARK(BM_reference)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_composed_serial)->Apply(args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_composed_omp)->Apply(args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
