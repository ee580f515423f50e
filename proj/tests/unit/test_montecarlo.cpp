#include <cmath>

#include "doctest.h"
#include "metastab/hierarchy.hpp"
#include "metastab/montecarlo.hpp"
#include "metastab/presets.hpp"

using namespace metastab;

namespace {

AsymptoticScalar scale(const ScaleBasis& basis, const std::string& text) {
  return parse_scale(basis, text);
}

// States 1,2,3 with constant branching 0.99 / 0.01 out of state 1.
ReducedSpec branching_spec() {
  ReducedSpec spec;
  spec.states = {"1", "2", "3"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.tau.assign(3, AsymptoticScalar::one());
  spec.sojourn.assign(3, SojournFamily{});
  auto s = [&](const std::string& t) { return scale(spec.basis, t); };
  spec.P(0, 1) = s("99/100");
  spec.P(0, 2) = s("1/100");
  spec.P(1, 0) = s("1");
  spec.P(2, 0) = s("1");
  return spec;
}

}  // namespace

TEST_CASE("instantiate: renormalized rows, means, and the regime guard") {
  ReducedSpec twowell = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(twowell, 0.01);
  CHECK(kernel.P[0][1] == doctest::Approx(1.0 / 1.01).epsilon(1e-14));
  CHECK(kernel.P[0][2] == doctest::Approx(0.01 / 1.01).epsilon(1e-14));
  CHECK(kernel.P[0][0] == 0.0);
  CHECK(kernel.P[0][3] == 0.0);
  for (int i = 0; i < kernel.size(); ++i) {
    double row = 0.0;
    for (double p : kernel.P[i]) row += p;
    CHECK(std::abs(row - 1.0) < 1e-12);
  }

  ReducedSpec renewal = two_state_renewal();
  ConcreteKernel renewal_kernel = instantiate(renewal, 0.1);
  CHECK(renewal_kernel.mean[0] == doctest::Approx(1.0));
  CHECK(renewal_kernel.mean[1] == doctest::Approx(0.1));

  // an entry of 5*eps at eps = 0.5 evaluates to 2.5 > 1.1: refuse loudly
  ReducedSpec loud = two_state_renewal();
  loud.P(0, 1) = scale(loud.basis, "5*eps");
  CHECK_THROWS_AS(instantiate(loud, 0.5), EvaluationError);
}

TEST_CASE("sojourn sampling: strictly positive, means near the target") {
  Xoshiro256 rng(42);
  for (SojournFamily family :
       {SojournFamily{}, SojournFamily{SojournKind::Gamma, Rational(3, 2), 0.0},
        SojournFamily{SojournKind::Gamma, Rational(1, 2), 0.0},
        SojournFamily{SojournKind::LogNormal, Rational(1), 0.7}}) {
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      double draw = sample_sojourn(family, 2.0, rng);
      CHECK(draw > 0.0);
      sum += draw;
    }
    double sample_mean = sum / n;
    double se = 2.0 * std::sqrt(family.squared_cv() / n);
    CHECK(std::abs(sample_mean - 2.0) < 4 * se);
  }
}

TEST_CASE("occupation: alternating renewal matches the analytic fraction") {
  ReducedSpec spec = two_state_renewal();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  OccupationResult result = occupation_distribution(kernel, 0, 100.0, 20000, 0);
  double analytic = 1.0 / 1.01;
  CHECK(std::abs(result.frequency[0] - analytic) < 0.02);
  CHECK(result.counts[0] + result.counts[1] == 20000);
  CHECK(result.wilson95[0].first < analytic);
  CHECK(result.wilson95[0].second > analytic);
}

TEST_CASE("occupation: non-exponential sojourns keep the renewal fraction") {
  // the long-run fraction tau1/(tau1+tau2) depends on the means only
  for (SojournFamily family : {SojournFamily{SojournKind::Gamma, Rational(2), 0.0},
                               SojournFamily{SojournKind::LogNormal, Rational(1), 0.5}}) {
    ReducedSpec spec = two_state_renewal();
    spec.sojourn.assign(2, family);
    ConcreteKernel kernel = instantiate(spec, 0.05);
    OccupationResult result = occupation_distribution(kernel, 0, 200.0, 10000, 2, 4);
    CHECK(std::abs(result.frequency[0] - 1.0 / 1.05) < 0.02);
  }
}

TEST_CASE("occupation: a time below any sojourn keeps the start state") {
  ReducedSpec spec = two_state_renewal();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  OccupationResult result = occupation_distribution(kernel, 1, 1e-9, 2000, 7);
  CHECK(result.counts[1] == 2000);
}

TEST_CASE("occupation: reproducible bit-exactly and worker-independent") {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 0.05);
  OccupationResult a = occupation_distribution(kernel, 0, 50.0, 4000, 123, 1);
  OccupationResult b = occupation_distribution(kernel, 0, 50.0, 4000, 123, 1);
  OccupationResult c = occupation_distribution(kernel, 0, 50.0, 4000, 123, 4);
  CHECK(a.counts == b.counts);
  CHECK(a.counts == c.counts);
}

TEST_CASE("wilson intervals: calibration on the analytic renewal example") {
  ReducedSpec spec = two_state_renewal();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  double truth = 1.0 / 1.01;
  int covered = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    OccupationResult result = occupation_distribution(kernel, 0, 50.0, 2000, seed);
    if (result.wilson95[0].first <= truth && truth <= result.wilson95[0].second) ++covered;
  }
  CHECK(covered >= 93);
}

TEST_CASE("exit times: KS statistic against Exp(1)") {
  // direct Exp(1) samples pass the 95% KS band
  std::vector<double> direct;
  Xoshiro256 rng = path_stream(0, 99);
  for (int i = 0; i < 10000; ++i) direct.push_back(-std::log(rng.next_open01()));
  CHECK(ks_vs_exp1(direct, 1.0) < 0.0136);

  // two-well cluster A at eps = 1e-2: normalized exit times are nearly Exp(1)
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  ConcreteKernel kernel = instantiate(spec, 1e-2);
  std::vector<double> samples = exit_time_samples(kernel, {0, 1}, 0, 10000, 0, 4);
  double normalizer = evaluate(spec.basis, tree.finite_time_scale(1, 0), 1e-2);
  CHECK(ks_vs_exp1(samples, normalizer) < 0.05);

  CHECK_THROWS(exit_time_samples(kernel, {0}, 0, 100, 0));  // single-state cluster
}

TEST_CASE("exit times: step budget guards non-termination") {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 1e-3);
  CHECK_THROWS_AS(exit_time_samples(kernel, {0, 1}, 0, 10000, 0, 1, 10000),
                  std::runtime_error);
}

TEST_CASE("oracles: immediate-exit visit count is exactly one") {
  ReducedSpec spec = branching_spec();
  ConcreteKernel kernel = instantiate(spec, 0.01);
  std::vector<double> visits = oracle_visits(kernel, {0}, 0);
  CHECK(visits[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracles: two-well values against asymptotic predictions") {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 1e-3);
  double visits = oracle_visits(kernel, {0, 1}, 0)[0];
  CHECK(std::abs(visits / 1000.0 - 1.0) < 0.01);

  double landed = oracle_hitting(kernel, {0, 1}, 0)[2];
  CHECK(std::abs(landed - 1.0) < 0.01);

  double exit = oracle_mean_exit(kernel, {0, 1}, 0);
  CHECK(std::abs(exit / 2000.0 - 1.0) < 0.01);
}

TEST_CASE("oracles agree with direct Monte Carlo within three standard errors") {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 0.05);

  const long long paths = 20000;
  std::vector<double> samples = exit_time_samples(kernel, {0, 1}, 0, paths, 3, 4);
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(paths);
  double variance = 0.0;
  for (double s : samples) variance += (s - mean) * (s - mean);
  variance /= static_cast<double>(paths - 1);
  double se = std::sqrt(variance / static_cast<double>(paths));
  CHECK(std::abs(mean - oracle_mean_exit(kernel, {0, 1}, 0)) < 3 * se);

  // hitting frequency of state 3 vs the absorbing-chain value
  long long hit3 = 0;
  for (long long p = 0; p < paths; ++p) {
    Xoshiro256 rng = path_stream(17, static_cast<uint64_t>(p));
    int state = 0;
    while (state == 0 || state == 1) state = kernel.sample_next(state, rng);
    if (state == 2) ++hit3;
  }
  double freq = static_cast<double>(hit3) / static_cast<double>(paths);
  double expected = oracle_hitting(kernel, {0, 1}, 0)[2];
  double se_h = std::sqrt(expected * (1 - expected) / static_cast<double>(paths));
  CHECK(std::abs(freq - expected) < 3 * se_h);
}

TEST_CASE("path samples: positive durations, stopping sets, reproducibility") {
  ReducedSpec spec = preset_two_well_polynomial();
  ConcreteKernel kernel = instantiate(spec, 0.05);

  PathSample horizon_path = sample_path(kernel, 0, 25.0, {}, 11);
  REQUIRE(!horizon_path.steps.empty());
  double total = 0.0;
  for (const auto& [state, duration] : horizon_path.steps) {
    CHECK(duration > 0.0);
    total += duration;
  }
  CHECK(total > 25.0);

  PathSample again = sample_path(kernel, 0, 25.0, {}, 11);
  CHECK(again.steps == horizon_path.steps);

  PathSample stopped = sample_path(kernel, 0, 1e12, {2, 3}, 11);
  int last = stopped.steps.back().first;
  CHECK((last == 2 || last == 3));
  for (size_t i = 0; i + 1 < stopped.steps.size(); ++i) {
    CHECK(stopped.steps[i].first != 2);
    CHECK(stopped.steps[i].first != 3);
  }
}

TEST_CASE("all three oracles agree with Monte Carlo on random small specs") {
  Xoshiro256 gen(2024);
  for (int trial = 0; trial < 3; ++trial) {
    // random two-well-shaped family: limit 2-cycles with random leak orders
    ReducedSpec spec;
    spec.states = {"1", "2", "3", "4"};
    spec.P = Grid<AsymptoticScalar>(4, 4);
    spec.sojourn.assign(4, SojournFamily{});
    auto s = [&](const std::string& t) { return parse_scale(spec.basis, t); };
    auto leak = [&] {
      return std::to_string(1 + gen.next() % 3) + "*eps^" + std::to_string(1 + gen.next() % 2);
    };
    spec.P(0, 1) = s("1");
    spec.P(0, 2) = s(leak());
    spec.P(1, 0) = s("1");
    spec.P(1, 3) = s(leak());
    spec.P(2, 3) = s("1");
    spec.P(2, 0) = s(leak());
    spec.P(3, 2) = s("1");
    spec.P(3, 1) = s(leak());
    for (int i = 0; i < 4; ++i)
      spec.tau.push_back(s(std::to_string(1 + gen.next() % 3)));
    ConcreteKernel kernel = instantiate(spec, 0.08);

    const long long paths = 20000;
    const std::vector<int> well = {0, 1};

    // mean exit time
    std::vector<double> samples = exit_time_samples(kernel, well, 0, paths, trial, 4);
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(paths);
    double variance = 0.0;
    for (double x : samples) variance += (x - mean) * (x - mean);
    variance /= static_cast<double>(paths - 1);
    CHECK(std::abs(mean - oracle_mean_exit(kernel, well, 0)) <
          3 * std::sqrt(variance / static_cast<double>(paths)));

    // hitting distribution and embedded visit counts in one sweep
    long long hit3 = 0;
    double visit_sum = 0.0, visit_sq = 0.0;
    for (long long p = 0; p < paths; ++p) {
      Xoshiro256 rng = path_stream(100 + trial, static_cast<uint64_t>(p));
      int state = 0;
      long long visits0 = 0;
      while (state == 0 || state == 1) {
        if (state == 0) ++visits0;
        state = kernel.sample_next(state, rng);
      }
      if (state == 2) ++hit3;
      visit_sum += static_cast<double>(visits0);
      visit_sq += static_cast<double>(visits0) * static_cast<double>(visits0);
    }
    double freq = static_cast<double>(hit3) / static_cast<double>(paths);
    double expected = oracle_hitting(kernel, well, 0)[2];
    double se_h = std::sqrt(expected * (1 - expected) / static_cast<double>(paths));
    CHECK(std::abs(freq - expected) < 3 * se_h + 1e-12);

    double visit_mean = visit_sum / static_cast<double>(paths);
    double visit_var =
        (visit_sq - visit_sum * visit_mean) / static_cast<double>(paths - 1);
    double se_v = std::sqrt(visit_var / static_cast<double>(paths));
    CHECK(std::abs(visit_mean - oracle_visits(kernel, well, 0)[0]) < 3 * se_v);
  }
}

TEST_CASE("rng streams are stable") {
  // frozen first outputs guard accidental algorithm changes
  Xoshiro256 rng(0);
  uint64_t first = rng.next();
  Xoshiro256 again(0);
  CHECK(again.next() == first);
  Xoshiro256 other = path_stream(0, 0);
  Xoshiro256 other2 = path_stream(0, 1);
  CHECK(other.next() != other2.next());
  double u = path_stream(0, 0).next_open01();
  CHECK(u > 0.0);
  CHECK(u < 1.0);
}
