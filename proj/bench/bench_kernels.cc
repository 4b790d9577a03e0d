#include <benchmark/benchmark.h>

#include "dpcsp/algo_maxcut.h"
#include "dpcsp/generators.h"
#include "dpcsp/mechanisms.h"
#include "dpcsp/oracles.h"
#include "dpcsp/parallel.h"

namespace {

using namespace dpcsp;

WeightedGraph BenchGraph(int n) { return GenRandomBipartite(n / 2, n - n / 2, 3 * n, 7); }

void BM_BruteForceOpt(benchmark::State& state) {
  WeightedGraph g = BenchGraph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceOpt(g).value);
}
BENCHMARK(BM_BruteForceOpt)->Arg(18)->Arg(22);

void BM_BruteForceOptSerial(benchmark::State& state) {
  WeightedGraph g = BenchGraph(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceOptSerial(g).value);
}
BENCHMARK(BM_BruteForceOptSerial)->Arg(18)->Arg(22);

void BM_EmOverAssignments(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  WeightedGraph g = BenchGraph(n);
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i;
  RngStream rng(1, 0);
  Assignment x(n);
  for (auto _ : state) EmOverAssignments(g, vars, 1.0, 1.0, x, rng);
}
BENCHMARK(BM_EmOverAssignments)->Arg(16)->Arg(20);

void BM_EmOverAssignmentsSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  WeightedGraph g = BenchGraph(n);
  std::vector<int> vars(n);
  for (int i = 0; i < n; ++i) vars[i] = i;
  RngStream rng(1, 0);
  Assignment x(n);
  for (auto _ : state) EmOverAssignmentsSerial(g, vars, 1.0, 1.0, x, rng);
}
BENCHMARK(BM_EmOverAssignmentsSerial)->Arg(16)->Arg(20);

void BM_PackingSeparation(benchmark::State& state) {
  auto fam = GenHardFamily(16, 0.5, 5, 3).family;
  for (auto _ : state) benchmark::DoNotOptimize(VerifyPackingSeparation(fam).ok);
}
BENCHMARK(BM_PackingSeparation);

void BM_PackingSeparationSerial(benchmark::State& state) {
  auto fam = GenHardFamily(16, 0.5, 5, 3).family;
  for (auto _ : state) benchmark::DoNotOptimize(VerifyPackingSeparationSerial(fam).ok);
}
BENCHMARK(BM_PackingSeparationSerial);

void BM_DpShearerTrials(benchmark::State& state) {
  WeightedGraph g = GenEvenCycle(50);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto v = RunTrials<double>(
        20000, 5, [&](RngStream& rng, std::size_t) { return CutValue(g, DpShearer(g, 1.0, rng)); }, parallel);
    benchmark::DoNotOptimize(v.data());
  }
}
BENCHMARK(BM_DpShearerTrials)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
