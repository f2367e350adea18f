#include <benchmark/benchmark.h>
#include <omp.h>

#include "tailscale/models.hpp"
#include "tailscale/oracle.hpp"
#include "tailscale/overdispersion.hpp"

namespace {

using namespace tailscale;

const ModelPair kModel = WorkedModel::poisson_gamma(1, 1, 3).pair();
const PowerScaling kScaling(1.5);

void BM_IsSerial(benchmark::State& state) {
  const McConfig cfg{static_cast<std::uint64_t>(state.range(0)), 42,
                     static_cast<unsigned>(state.range(1))};
  for (auto _ : state)
    benchmark::DoNotOptimize(serial::is_tail(kModel, kScaling, 400, 0.48, cfg).probability);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IsOpenMP(benchmark::State& state) {
  const McConfig cfg{static_cast<std::uint64_t>(state.range(0)), 42,
                     static_cast<unsigned>(state.range(1))};
  omp_set_num_threads(static_cast<int>(cfg.workers));
  for (auto _ : state)
    benchmark::DoNotOptimize(is_tail(kModel, kScaling, 400, 0.48, cfg).probability);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Tables(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reproduce_tables());
}

}  // namespace

BENCHMARK(BM_IsSerial)->ArgsProduct({{100000}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IsOpenMP)->ArgsProduct({{100000}, {1, 2, 4, 8}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_Tables)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
