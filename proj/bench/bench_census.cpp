// Serial reference census against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include "wsaw/census.hpp"
#include "wsaw/enumerate.hpp"

using namespace wsaw;

namespace {

void BM_CensusSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Domain whole = Domain::whole(2);
  for (auto _ : state) {
    WalkCensus c = census_serial(whole, Point{0, 0}, n, false);
    benchmark::DoNotOptimize(c.total_walks());
  }
  state.counters["walks"] = benchmark::Counter(
      static_cast<double>(census_serial(whole, Point{0, 0}, n, false).total_walks()),
      benchmark::Counter::kIsIterationInvariantRate);
}

void BM_CensusParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const Domain whole = Domain::whole(2);
  std::uint64_t walks = 0;
  for (auto _ : state) {
    WalkCensus c = census_parallel(whole, Point{0, 0}, n, false, threads);
    walks = c.total_walks();
    benchmark::DoNotOptimize(walks);
  }
  state.counters["walks"] =
      benchmark::Counter(static_cast<double>(walks), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_SelfAvoidingParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    WalkCensus c = census_parallel(Domain::whole(2), Point{0, 0}, n, true, threads);
    benchmark::DoNotOptimize(c.total_walks());
  }
}

void BM_FreeWalkSums(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  for (auto _ : state) {
    FreeWalkSums f = free_walk_sums(Domain::whole(3), Point{0, 0, 0}, n, 0.1, threads);
    benchmark::DoNotOptimize(f.mass_at_n);
  }
}

}  // namespace

BENCHMARK(BM_CensusSerial)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->ArgsProduct({{10, 12}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SelfAvoidingParallel)->ArgsProduct({{16}, {1, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FreeWalkSums)->ArgsProduct({{100}, {1, 4}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
