#include <benchmark/benchmark.h>

#include <random>

#include "meanflow/jet.hpp"
#include "meanflow/massive.hpp"
#include "meanflow/massless.hpp"
#include "meanflow/tensor.hpp"

using namespace meanflow;

namespace {

Jet random_jet(std::mt19937_64& rng, int order) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<ExtReal> c;
  for (int k = 0; k <= order; ++k) c.emplace_back(u(rng));
  return Jet(ExtReal(0), c);
}

void BM_JetMul(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const Jet a = random_jet(rng, order), b = random_jet(rng, order);
  for (auto _ : state) benchmark::DoNotOptimize(jet_mul(a, b));
  state.SetComplexityN(order);
}
BENCHMARK(BM_JetMul)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_TaylorTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fill_taylor_table(ExtReal("0.1"), ExtReal("0.01"), 1, n, n));
}
BENCHMARK(BM_TaylorTable)->Arg(12)->Arg(24)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_HValue(benchmark::State& state) {
  const ExtReal beta = pow(ExtReal(10), static_cast<long>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(h_value(beta));
}
BENCHMARK(BM_HValue)->DenseRange(-4, 4, 4)->Unit(benchmark::kMicrosecond);

void BM_PairingTensor(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0)), r = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(build_pairing_tensor(N, r));
}
BENCHMARK(BM_PairingTensor)->Args({2, 8})->Args({3, 6})->Args({4, 8})->Unit(benchmark::kMillisecond);

void BM_ContractionIdentities(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(verify_contraction_identities(static_cast<int>(state.range(0)), 6));
}
BENCHMARK(BM_ContractionIdentities)->DenseRange(2, 4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
