#include <benchmark/benchmark.h>

#include "dadim/dad_witness.hpp"

using namespace dadim;

static void BM_ConstructOdometer(benchmark::State& state) {
  auto sys = SymbolicSystem::odometer({2});
  const long N = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(construct_minimal_z_witness(sys, N));
}
BENCHMARK(BM_ConstructOdometer)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

static void BM_VerifyOdometer(benchmark::State& state) {
  auto sys = SymbolicSystem::odometer({2});
  const auto c = construct_minimal_z_witness(sys, state.range(0));
  const long bound = default_blowup_bound(c.witness);
  for (auto _ : state) benchmark::DoNotOptimize(verify_dad_witness(sys, c.witness, bound));
}
BENCHMARK(BM_VerifyOdometer)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

// Fibonacci subshift: language growth dominates.
static void BM_ConstructFibonacci(benchmark::State& state) {
  auto sys = SymbolicSystem::substitution({"a", "b"}, {{"a", "ab"}, {"b", "a"}});
  for (auto _ : state) benchmark::DoNotOptimize(construct_minimal_z_witness(sys, state.range(0)));
}
BENCHMARK(BM_ConstructFibonacci)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_WholeSpaceRejected(benchmark::State& state) {
  auto sys = SymbolicSystem::odometer({2});
  DadWitness w;
  w.generators = {-1, 0, 1};
  w.colors = {ClopenSet::whole(sys)};
  for (auto _ : state) benchmark::DoNotOptimize(verify_dad_witness(sys, w, state.range(0)));
}
BENCHMARK(BM_WholeSpaceRejected)->RangeMultiplier(10)->Range(10, 100000);
