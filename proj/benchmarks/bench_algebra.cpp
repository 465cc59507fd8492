#include <benchmark/benchmark.h>

#include <algorithm>

#include "dadim/convolution.hpp"
#include "dadim/pipeline.hpp"
#include "dadim/pou.hpp"

using namespace dadim;

static void BM_ReducedNormPair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto P = FiniteGroupoid::pair(n);
  const auto f = to_complex(random_element(P, 2 * n, 5, 1));
  for (auto _ : state) benchmark::DoNotOptimize(reduced_norm(f));
}
BENCHMARK(BM_ReducedNormPair)->RangeMultiplier(2)->Range(4, 64);

static void BM_ConvolveRotation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto G = FiniteGroupoid::transformation(FiniteAction::rotation(n));
  const auto f = random_element(G, 4 * static_cast<std::size_t>(n), 5, 2);
  const auto g = random_element(G, 4 * static_cast<std::size_t>(n), 5, 3);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(f, g));
}
BENCHMARK(BM_ConvolveRotation)->RangeMultiplier(2)->Range(8, 128);

// Enlarge, towers and the exact partition of unity on Z/n with two half arcs.
static void BM_RotationPou(benchmark::State& state) {
  const int n = 12;
  const int N = static_cast<int>(state.range(0));
  const auto G = FiniteGroupoid::transformation(FiniteAction::rotation(n));
  auto K = arrows_with_group_parts(G, {n - 1, 0, 1});
  std::sort(K.begin(), K.end());
  std::vector<Unit> a, b;
  for (Unit x = 0; x < n / 2; ++x) a.push_back(x);
  for (Unit x = n / 2; x < n; ++x) b.push_back(x);
  for (auto _ : state) {
    const auto cover = enlarge_cover(G, K, {a, b}, 144);
    const auto pou = build_pou(build_tower(G, K, cover.colors, N, 144), G.num_units());
    benchmark::DoNotOptimize(verify_pou(G, K, pou, Rational(1)));
  }
}
BENCHMARK(BM_RotationPou)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

static void BM_Pipeline(benchmark::State& state) {
  const auto dir = std::filesystem::temp_directory_path() / "dadim_bench_pipeline";
  const auto sys = io::parse_json(R"({"kind":"odometer","base":[2]})");
  PipelineParams p;
  p.depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(sys, p, dir));
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_Pipeline)->DenseRange(5, 7)->Unit(benchmark::kMillisecond);
