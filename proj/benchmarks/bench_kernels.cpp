#include <benchmark/benchmark.h>

#include <random>

#include "anormal/classes.hpp"
#include "anormal/semihilbert.hpp"
#include "anormal/shift.hpp"

using namespace anormal;

namespace {

ComplexMatrix gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  }
  return m;
}

// Full-rank metric, so any T lies in B_A.
MetricContext metric(std::mt19937_64& rng, Eigen::Index n) {
  const ComplexMatrix g = gaussian(rng, n);
  return make_context(g * g.adjoint() + ComplexMatrix::Identity(n, n));
}

void BM_PseudoInverse(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const ComplexMatrix m = gaussian(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_inverse(m, Tolerance{}));
}
BENCHMARK(BM_PseudoInverse)->Arg(4)->Arg(16)->Arg(64);

void BM_MakeContext(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const ComplexMatrix g = gaussian(rng, state.range(0));
  const ComplexMatrix a = g * g.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(make_context(a));
}
BENCHMARK(BM_MakeContext)->Arg(4)->Arg(16)->Arg(64);

void BM_AAdjoint(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto ctx = metric(rng, state.range(0));
  const ComplexMatrix t = gaussian(rng, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(a_adjoint(ctx, t));
}
BENCHMARK(BM_AAdjoint)->Arg(4)->Arg(16)->Arg(64);

void BM_NmNormalResidual(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto ctx = metric(rng, state.range(0));
  const auto t = a_adjoint(ctx, gaussian(rng, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nm_normal_residual(t, {4, 4}));
}
BENCHMARK(BM_NmNormalResidual)->Arg(4)->Arg(16);

void BM_ShiftClassCheck(benchmark::State& state) {
  const auto s = shift::unilateral_shift();
  const ClassIndex idx{static_cast<int>(state.range(0)), 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        shift::shift_class_check(s, idx, shift::ShiftClass::quasinormal));
  }
}
BENCHMARK(BM_ShiftClassCheck)->Arg(2)->Arg(8);

}  // namespace
