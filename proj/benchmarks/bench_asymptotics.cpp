#include <benchmark/benchmark.h>

#include "metastab/asymptotics.hpp"

using namespace metastab;

namespace {

const ScaleBasis& basis() {
  static ScaleBasis b = ScaleBasis::standard();
  return b;
}

void ParseScale(benchmark::State& state) {
  for (auto _ : state) {
    AsymptoticScalar s = parse_scale(basis(), "3/2*exp_inv_eps_sq^1/2*eps^3");
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(ParseScale);

void LeadingOrderSum(benchmark::State& state) {
  std::vector<AsymptoticScalar> terms;
  for (int k = 1; k <= state.range(0); ++k)
    terms.push_back(parse_scale(basis(), std::to_string(k) + "*eps^" + std::to_string(k % 5)));
  for (auto _ : state) {
    AsymptoticScalar s = add(terms);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(LeadingOrderSum)->Arg(8)->Arg(64);

void CompareScales(benchmark::State& state) {
  AsymptoticScalar a = parse_scale(basis(), "2*exp_inv_eps*eps^2");
  AsymptoticScalar b = parse_scale(basis(), "3*exp_inv_eps*eps^2*log_inv_eps");
  for (auto _ : state) {
    Comparison c = compare(a, b);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(CompareScales);

}  // namespace
