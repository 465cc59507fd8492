#include <benchmark/benchmark.h>

#include "dadim/coarse.hpp"
#include "dadim/nerve.hpp"

using namespace dadim;

static void BM_IntervalBridge(benchmark::State& state) {
  const GridSpace X({0}, {state.range(0) - 1});
  const auto w = construct_grid_witness(X, 10);
  for (auto _ : state) benchmark::DoNotOptimize(bridge_to_groupoid(X, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_IntervalBridge)->RangeMultiplier(4)->Range(500, 32000)->Unit(benchmark::kMillisecond);

static void BM_BrickVerify(benchmark::State& state) {
  const long side = state.range(0);
  const GridSpace X({0, 0}, {side - 1, side - 1});
  const auto w = construct_grid_witness(X, 5);
  for (auto _ : state) benchmark::DoNotOptimize(verify_asdim_witness(X, w));
  state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_BrickVerify)->RangeMultiplier(2)->Range(25, 200)->Unit(benchmark::kMillisecond);

static void BM_MinColorsPath(benchmark::State& state) {
  const auto X = TableSpace::path(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_min_colors(X, 2, 4));
}
BENCHMARK(BM_MinColorsPath)->DenseRange(6, 14, 2)->Unit(benchmark::kMillisecond);

// Exact nice-cover assignment over a barycentric grid of the 2-simplex.
static void BM_NiceCoverGrid(benchmark::State& state) {
  const auto C = SimplicialComplex::simplex(3);
  const long D = state.range(0);
  std::vector<SimplicialPoint> pts;
  for (long a = 0; a <= D; ++a)
    for (long b = 0; a + b <= D; ++b) {
      std::map<Vertex, Rational> w;
      if (a) w[0] = make_rational(a, D);
      if (b) w[1] = make_rational(b, D);
      if (D - a - b) w[2] = make_rational(D - a - b, D);
      pts.emplace_back(w);
    }
  for (auto _ : state)
    for (const auto& p : pts) benchmark::DoNotOptimize(nice_cover_assign(p, C));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(pts.size()));
}
BENCHMARK(BM_NiceCoverGrid)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
