#include <benchmark/benchmark.h>

#include <random>

#include "metastab/metastable.hpp"
#include "metastab/presets.hpp"

using namespace metastab;

namespace {

// Chain of n/2 wells, each an internal 2-cycle, linked by increasingly rare
// leaks; produces an n/2-deep hierarchy.
ReducedSpec well_chain(int wells) {
  ReducedSpec spec;
  const int m = 2 * wells;
  for (int i = 0; i < m; ++i) spec.states.push_back(std::to_string(i + 1));
  spec.P = Grid<AsymptoticScalar>(m, m);
  spec.tau.assign(m, AsymptoticScalar::one());
  spec.sojourn.assign(m, SojournFamily{});
  auto s = [&](const std::string& t) { return parse_scale(spec.basis, t); };
  for (int w = 0; w < wells; ++w) {
    int a = 2 * w, b = 2 * w + 1;
    spec.P(a, b) = s("1");
    spec.P(b, a) = s("1");
    int next = (2 * w + 2) % m;
    spec.P(a, next) = s("eps^" + std::to_string(w + 1));
  }
  return spec;
}

void BuildHierarchy(benchmark::State& state) {
  ReducedSpec spec = well_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    ClusterTree tree = build_cluster_tree(spec);
    benchmark::DoNotOptimize(tree);
  }
}
BENCHMARK(BuildHierarchy)->Arg(2)->Arg(4)->Arg(8);

void FullReport(benchmark::State& state) {
  ReducedSpec spec = well_chain(4);
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  for (auto _ : state) {
    auto entries = full_report(tree, lattice, 0);
    benchmark::DoNotOptimize(entries);
  }
}
BENCHMARK(FullReport);

}  // namespace
