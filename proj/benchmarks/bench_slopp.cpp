#include <benchmark/benchmark.h>

#include <cmath>

#include "slopp/inference.hpp"
#include "slopp/learner.hpp"
#include "slopp/random.hpp"
#include "slopp/vtree_learn.hpp"

namespace {

// Each variable copies its predecessor with probability 0.6, otherwise draws
// from a per-variable bias.
slopp::Dataset chain_data(std::size_t n, std::size_t records, std::uint64_t seed) {
  slopp::Rng rng(seed);
  std::vector<double> bias(n);
  for (auto& b : bias) b = 0.1 + 0.8 * rng.uniform();
  slopp::Dataset d(n);
  for (std::size_t r = 0; r < records; ++r) {
    slopp::Assignment a(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = (i > 0 && rng.uniform() < 0.6) ? a[i - 1] : rng.uniform() < bias[i];
    }
    d.add(a);
  }
  return d.aggregated();
}

void BM_Learn(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = static_cast<std::size_t>(state.range(1));
  slopp::Dataset data = chain_data(n, m, 1);
  slopp::Vtree vtree = slopp::balanced_vtree(n);
  slopp::LearnConfig cfg;
  cfg.k = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(slopp::slopp(data, vtree, cfg));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m));
}
BENCHMARK(BM_Learn)->Args({16, 1000})->Args({16, 16000})->Args({32, 16000})->Unit(benchmark::kMillisecond);

void BM_ChowLiuVtree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  slopp::Dataset data = chain_data(n, 16000, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slopp::learn_vtree(data, slopp::VtreeMethod::kChowLiu));
  }
}
BENCHMARK(BM_ChowLiuVtree)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_DatasetLL(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  slopp::Dataset train = chain_data(n, 16000, 3);
  slopp::Dataset test = chain_data(n, 3000, 4);
  slopp::LearnConfig cfg;
  cfg.k = 3;
  slopp::Circuit c = slopp::slopp(train, slopp::balanced_vtree(n), cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(slopp::dataset_ll(c, test));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(test.size()));
}
BENCHMARK(BM_DatasetLL)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
