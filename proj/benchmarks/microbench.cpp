#include <benchmark/benchmark.h>

#include "hcs/bench.hpp"
#include "hcs/dequantizer.hpp"
#include "hcs/measurement.hpp"
#include "hcs/quantizer.hpp"
#include "hcs/recovery.hpp"

namespace {

struct Fixture {
  hcs::MeasurementEnsemble ensemble;
  hcs::OneBitMeasurements y;
};

Fixture make(std::size_t n, std::size_t m, std::size_t sparsity) {
  auto x = hcs::generate_sparse_signal(n, sparsity, 1);
  auto ens = hcs::MeasurementEnsemble::generate(n, m, 2);
  auto y = hcs::measure(ens, x);
  return {std::move(ens), std::move(y)};
}

void BM_Recover(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto f = make(n, 4096, n / 8);
  const hcs::HcsQuantizer q({k, -1.0, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(hcs::recover(f.y, f.ensemble, q));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Recover)->ArgsProduct({{128, 256, 512, 1024}, {8, 64}})->Complexity();

void BM_RecoverDescent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto f = make(n, 4096, n / 8);
  const hcs::HcsQuantizer q({64, -1.0, 1.0});
  for (auto _ : state) {
    benchmark::DoNotOptimize(hcs::recover(f.y, f.ensemble, q, hcs::SearchStrategy::kNeighborDescent));
  }
}
BENCHMARK(BM_RecoverDescent)->Arg(256)->Arg(1024);

void BM_EstimateAll(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto f = make(256, m, 16);
  for (auto _ : state) benchmark::DoNotOptimize(hcs::estimate_all(f.y, f.ensemble));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m * 256));
}
BENCHMARK(BM_EstimateAll)->RangeMultiplier(4)->Range(256, 65536);

void BM_BuildQuantizer(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hcs::HcsQuantizer({k, -1.0, 1.0}));
}
BENCHMARK(BM_BuildQuantizer)->RangeMultiplier(4)->Range(4, 4096);

void BM_Biht(benchmark::State& state) {
  const auto f = make(128, 1024, 5);
  hcs::DequantizerConfig config;
  config.sparsity = 5;
  config.max_iterations = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hcs::biht(f.y, f.ensemble, config));
}
BENCHMARK(BM_Biht)->Arg(10)->Arg(50);

}  // namespace

BENCHMARK_MAIN();
