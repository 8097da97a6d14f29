#include <benchmark/benchmark.h>

#include "anormal/lab.hpp"

using namespace anormal;

namespace {

void BM_RunSuite(benchmark::State& state) {
  lab::SuiteConfig cfg;
  cfg.trials = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lab::run_suite(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.trials *
                          static_cast<std::int64_t>(lab::registry().size()));
}
BENCHMARK(BM_RunSuite)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_GenerateDense(benchmark::State& state) {
  lab::GeneratorSpec spec;
  spec.family = lab::Family::a_normal;
  spec.dim = static_cast<int>(state.range(0));
  spec.metric_rank = spec.dim - 1;
  for (auto _ : state) {
    ++spec.seed;
    benchmark::DoNotOptimize(lab::generate_dense(spec));
  }
}
BENCHMARK(BM_GenerateDense)->Arg(4)->Arg(16);

}  // namespace
