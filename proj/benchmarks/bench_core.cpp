#include <benchmark/benchmark.h>

#include "ainf/curved.hpp"
#include "ainf/hochschild.hpp"
#include "ainf/presets.hpp"
#include "ainf/rescaling.hpp"

using namespace ainf;

static void BM_CheckAllConstructions(benchmark::State& state) {
  const auto structures = presets::all();
  for (auto _ : state) {
    for (const auto& [name, a] : structures) benchmark::DoNotOptimize(check_all_constructions(*a));
  }
}
BENCHMARK(BM_CheckAllConstructions);

static void BM_EulerCertificate(benchmark::State& state) {
  auto e4 = presets::e4();
  for (auto _ : state) benchmark::DoNotOptimize(euler_certificate(*e4));
}
BENCHMARK(BM_EulerCertificate);

static void BM_HHRank(benchmark::State& state) {
  auto e1 = presets::e1();
  const int cap = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hh_rank(*e1, 1, cap));
}
BENCHMARK(BM_HHRank)->DenseRange(2, 5);

static void BM_Deform(benchmark::State& state) {
  auto e4 = presets::e4();
  const Element b = parse_element(e4->space(), "p:1/2,r:-3");
  for (auto _ : state) benchmark::DoNotOptimize(deform(*e4, b));
}
BENCHMARK(BM_Deform);

static void BM_Rescale(benchmark::State& state) {
  auto e3 = presets::e3(Scalar(1));
  for (auto _ : state) benchmark::DoNotOptimize(rescaling_morphism(e3, {Scalar(3, 2), 2, -1}));
}
BENCHMARK(BM_Rescale);
