// Microbenchmarks for the two hot kernels: panel simulation and the moment
// summary. Each has a serial reference implementation (mfbs::reference) used
// by the tests; these benchmarks compare it against the OpenMP build so
// regressions in either path show up. On a single hardware thread the two
// should be within noise of each other.

#include <benchmark/benchmark.h>

#include "mfbs/model.hpp"
#include "mfbs/moments.hpp"
#include "mfbs/reference.hpp"

namespace {

const mfbs::ModelParams kParams;  // H=0.7, gamma^2=0.25, sigma^2=0.04, h=1
const mfbs::EffectsDistribution kDist = mfbs::EffectsDistribution::Beta(2, 2);

void BM_SimulatePanel(benchmark::State& state) {
  const auto subjects = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto panel = mfbs::simulate_panel(kParams, kDist, subjects, n, 42);
    benchmark::DoNotOptimize(panel.increments.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(subjects * (n + 4)));
}

void BM_SimulatePanelReference(benchmark::State& state) {
  const auto subjects = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto panel =
        mfbs::reference::simulate_panel(kParams, kDist, subjects, n, 42);
    benchmark::DoNotOptimize(panel.increments.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(subjects * (n + 4)));
}

void BM_Summarize(benchmark::State& state) {
  const auto subjects = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto panel = mfbs::simulate_panel(kParams, kDist, subjects, n, 42);
  for (auto _ : state) {
    auto summary = mfbs::summarize(panel, n);
    benchmark::DoNotOptimize(summary.xi_bar);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(subjects * n));
}

void BM_SummarizeReference(benchmark::State& state) {
  const auto subjects = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto panel = mfbs::simulate_panel(kParams, kDist, subjects, n, 42);
  for (auto _ : state) {
    auto summary = mfbs::reference::summarize(panel, n);
    benchmark::DoNotOptimize(summary.xi_bar);
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(subjects * n));
}

}  // namespace

BENCHMARK(BM_SimulatePanel)->Args({64, 256})->Args({16, 1024});
BENCHMARK(BM_SimulatePanelReference)->Args({64, 256})->Args({16, 1024});
BENCHMARK(BM_Summarize)->Args({64, 256})->Args({256, 1024});
BENCHMARK(BM_SummarizeReference)->Args({64, 256})->Args({256, 1024});

BENCHMARK_MAIN();
