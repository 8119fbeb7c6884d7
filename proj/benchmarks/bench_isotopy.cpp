#include <benchmark/benchmark.h>

#include "ainf/isotopy.hpp"
#include "ainf/presets.hpp"

using namespace ainf;

namespace {

Gauge example_gauge(const SpacePtr& space) {
  return Gauge(space, {{ScalarFunction::reciprocal_linear(Scalar(1), Scalar(1)),
                        MultiMap::identity(space) - MultiMap::euler(space)}});
}

RibbonTree chain(int n) {
  RibbonTree t = RibbonTree::make_leaf();
  for (int i = 0; i < n; ++i) t = RibbonTree::vertex({t});
  return t;
}

}  // namespace

static void BM_EnumerateTrees(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_trees(k, k + 2, {1, 2, 3}));
}
BENCHMARK(BM_EnumerateTrees)->DenseRange(1, 4);

static void BM_ChainGauss(benchmark::State& state) {
  auto e1 = presets::e1();
  const Gauge g = example_gauge(e1->space());
  const auto t = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_tree(t, g, Scalar(1), Quadrature{}));
}
BENCHMARK(BM_ChainGauss)->DenseRange(1, 6);

static void BM_ChainMonteCarlo(benchmark::State& state) {
  auto e1 = presets::e1();
  const Gauge g = example_gauge(e1->space());
  const auto t = chain(static_cast<int>(state.range(0)));
  Quadrature q;
  q.kind = Quadrature::Kind::MonteCarlo;
  q.samples = 20000;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_tree(t, g, Scalar(1), q));
}
BENCHMARK(BM_ChainMonteCarlo)->DenseRange(1, 6);

static void BM_GrowingPathTreeSum(benchmark::State& state) {
  auto e1 = presets::e1();
  std::vector<MultiMap> delta;
  for (const auto& [k, m] : e1->ops()) delta.push_back(m);
  const Path path = Path::linear(e1, delta);
  const Gauge g = example_gauge(e1->space());
  const int vmax = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(formal_endomorphism(path, g, Scalar(1), 1, vmax, Quadrature{}));
}
BENCHMARK(BM_GrowingPathTreeSum)->Arg(5)->Arg(10)->Arg(20);

static void BM_StrictExp(benchmark::State& state) {
  auto e3 = presets::e3(Scalar(1));
  const Path path = Path::rescaling(e3, {Scalar(3), 1, 2});
  const Gauge g = auto_gauge(path);
  for (auto _ : state) benchmark::DoNotOptimize(strict_exp(g, Scalar(1)));
}
BENCHMARK(BM_StrictExp);
