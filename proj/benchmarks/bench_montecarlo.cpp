#include <benchmark/benchmark.h>

#include "metastab/montecarlo.hpp"
#include "metastab/presets.hpp"

using namespace metastab;

namespace {

void SojournThroughput(benchmark::State& state) {
  Xoshiro256 rng(1);
  SojournFamily family;
  double sum = 0.0;
  for (auto _ : state) sum += sample_sojourn(family, 1.0, rng);
  benchmark::DoNotOptimize(sum);
}
BENCHMARK(SojournThroughput);

void OccupationRun(benchmark::State& state) {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  for (auto _ : state) {
    OccupationResult result =
        occupation_distribution(kernel, 0, 100.0, state.range(0), 0, 1);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(OccupationRun)->Arg(1000)->Arg(10000);

void ExitSampling(benchmark::State& state) {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  for (auto _ : state) {
    auto samples = exit_time_samples(kernel, {0, 1}, 0, 1000, 0, 1);
    benchmark::DoNotOptimize(samples);
  }
}
BENCHMARK(ExitSampling);

}  // namespace
