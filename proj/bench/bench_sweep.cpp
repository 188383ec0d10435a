// Serial reference against the OpenMP batch on one Monte-Carlo sweep cell.

#include <benchmark/benchmark.h>

#include "czupt/sweep.hpp"

namespace {

std::vector<czupt::ScenarioConfig> batch(int runs) {
  czupt::ScenarioConfig base;
  base.duration = 1.0;
  base.gamma = 0.05;
  std::vector<czupt::ScenarioConfig> out;
  for (int s = 1; s <= runs; ++s) {
    czupt::ScenarioConfig c = base;
    c.seed = static_cast<std::uint64_t>(s);
    out.push_back(c);
  }
  return out;
}

void BM_BatchSerial(benchmark::State& state) {
  const auto cfgs = batch(static_cast<int>(state.range(0)));
  const czupt::LqgDesign d = czupt::design_lqg(cfgs.front());
  for (auto _ : state) benchmark::DoNotOptimize(czupt::run_batch_serial(cfgs, d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchParallel(benchmark::State& state) {
  const auto cfgs = batch(static_cast<int>(state.range(0)));
  const czupt::LqgDesign d = czupt::design_lqg(cfgs.front());
  for (auto _ : state) benchmark::DoNotOptimize(czupt::run_batch_parallel(cfgs, d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_BatchSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
