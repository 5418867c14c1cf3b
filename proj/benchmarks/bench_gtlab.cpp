#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "gtlab/adaptive.hpp"
#include "gtlab/bounds.hpp"
#include "gtlab/entropy.hpp"
#include "gtlab/oracle.hpp"

namespace {

void BM_GInverse(benchmark::State& state) {
  const gtlab::DefectModel m(0.2);
  const auto k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::g_dk_inverse(m, k, 0.7219));
}
BENCHMARK(BM_GInverse)->Arg(1)->Arg(3)->Arg(12);

void BM_MainBound(benchmark::State& state) {
  const double delta = static_cast<double>(state.range(0)) / 1000.0;
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::bounds::main_bound({delta, 0.0}));
}
BENCHMARK(BM_MainBound)->Arg(20)->Arg(200)->Arg(340);

void BM_Sweep(benchmark::State& state) {
  std::vector<double> grid;
  for (int i = 0; i <= 490; ++i) grid.push_back(0.01 + 0.001 * i);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::bounds::sweep(grid, 0.0, workers));
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

void BM_Enumerate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = gtlab::oracle::random_matrix(1, n, 6, 2, 4);
  const gtlab::DefectModel model(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::oracle::enumerate_distribution(m, model));
}
BENCHMARK(BM_Enumerate)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_InclExcl(benchmark::State& state) {
  const auto t = static_cast<std::size_t>(state.range(0));
  const auto m = gtlab::oracle::random_matrix(2, 24, t, 2, 6);
  std::vector<std::size_t> all(t);
  std::iota(all.begin(), all.end(), 0);
  const gtlab::DefectModel model(0.3);
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::oracle::prob_all_positive_incl_excl(m, all, model));
}
BENCHMARK(BM_InclExcl)->Arg(6)->Arg(12)->Arg(18)->Unit(benchmark::kMicrosecond);

void BM_Simulate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gtlab::adaptive::simulate({1000, 0.2, 400, 7, 1}));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
