#include <benchmark/benchmark.h>

#include "atd/landscape.hpp"
#include "atd/spectral.hpp"
#include "atd/transport.hpp"

namespace {

void BM_SweepConductance(benchmark::State& state) {
  const auto a = atd::generate(atd::CanonicalSpec::uniform_causal(
      static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(atd::sweep_conductance(a).phi);
  }
}
BENCHMARK(BM_SweepConductance)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AsymmetryG(benchmark::State& state) {
  const auto m = atd::normalize(atd::generate(atd::CanonicalSpec::uniform_causal(
      static_cast<int>(state.range(0)))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(atd::asymmetry_g(m));
  }
}
BENCHMARK(BM_AsymmetryG)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ExactConductance(benchmark::State& state) {
  const auto a = atd::generate(atd::CanonicalSpec::uniform_causal(
      static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(atd::exact_conductance(a).phi);
  }
}
BENCHMARK(BM_ExactConductance)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_TemporalSweep(benchmark::State& state) {
  const auto a = atd::generate(atd::CanonicalSpec::uniform_causal(
      static_cast<int>(state.range(0))));
  for (auto _ : state) {
    benchmark::DoNotOptimize(atd::temporal_sweep(a).phi_min);
  }
}
BENCHMARK(BM_TemporalSweep)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
