// Parallel frontier sweep vs the serial pairwise search for the full
// must-precede matrix.

#include <benchmark/benchmark.h>

#include "locksem/reorder.hpp"
#include "locksem/tracegen.hpp"

namespace {

locksem::Trace sample(std::int64_t events) {
  return locksem::generate({7, 4, 3, static_cast<std::size_t>(events)});
}

void BM_MatrixParallel(benchmark::State& state) {
  auto t = sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(locksem::must_precede_matrix(t));
  state.counters["events"] = static_cast<double>(t.size());
}

void BM_MatrixSerial(benchmark::State& state) {
  auto t = sample(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(locksem::must_precede_matrix_serial(t));
  state.counters["events"] = static_cast<double>(t.size());
}

}  // namespace

BENCHMARK(BM_MatrixParallel)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MatrixSerial)->Arg(8)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
