#include <random>

#include "doctest.h"
#include "metastab/model.hpp"
#include "metastab/presets.hpp"

using namespace metastab;

namespace {

AsymptoticScalar scale(const ScaleBasis& basis, const std::string& text) {
  return parse_scale(basis, text);
}

// 2-state raw family: P_12 = P_21 = 1, T_12 = 1, T_21 = eps.
RawSpec tiny_raw() {
  RawSpec spec;
  spec.states = {"1", "2"};
  spec.P = Grid<AsymptoticScalar>(2, 2);
  spec.T = Grid<AsymptoticScalar>(2, 2);
  spec.sojourn = Grid<SojournFamily>(2, 2);
  spec.P(0, 1) = scale(spec.basis, "1");
  spec.T(0, 1) = scale(spec.basis, "1");
  spec.P(1, 0) = scale(spec.basis, "1");
  spec.T(1, 0) = scale(spec.basis, "eps");
  return spec;
}

// 3-state raw family with a weak extra edge out of state 1.
RawSpec three_state_raw() {
  RawSpec spec;
  spec.states = {"1", "2", "3"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.T = Grid<AsymptoticScalar>(3, 3);
  spec.sojourn = Grid<SojournFamily>(3, 3);
  auto set = [&](int i, int j, const std::string& p) {
    spec.P(i, j) = scale(spec.basis, p);
    spec.T(i, j) = scale(spec.basis, "1");
  };
  set(0, 1, "1");
  set(0, 2, "eps");
  set(1, 0, "1");
  set(2, 0, "1");
  return spec;
}

bool has_code(const std::vector<Diagnostic>& diagnostics, const std::string& code) {
  for (const auto& d : diagnostics)
    if (d.code == code) return true;
  return false;
}

}  // namespace

TEST_CASE("validate: nonzero diagonal") {
  RawSpec spec = tiny_raw();
  spec.P(0, 0) = scale(spec.basis, "eps");
  spec.T(0, 0) = scale(spec.basis, "1");
  auto diagnostics = validate(spec);
  CHECK(has_code(diagnostics, "nonzero-diagonal"));
  CHECK(has_errors(diagnostics));
}

TEST_CASE("validate: leading row sum of 1 with a lower-order extra entry") {
  RawSpec spec = three_state_raw();
  auto diagnostics = validate(spec);
  CHECK(diagnostics.empty());
}

TEST_CASE("validate: row normalization is a warning and divides by the leading sum") {
  RawSpec spec = tiny_raw();
  spec.P(0, 1) = scale(spec.basis, "2");
  auto diagnostics = validate(spec);
  CHECK(has_code(diagnostics, "row-normalized"));
  CHECK(!has_errors(diagnostics));
  CHECK(spec.P(0, 1) == AsymptoticScalar::one());
}

TEST_CASE("validate: disconnected limit cycles that never communicate") {
  RawSpec spec;
  spec.states = {"1", "2", "3", "4"};
  spec.P = Grid<AsymptoticScalar>(4, 4);
  spec.T = Grid<AsymptoticScalar>(4, 4);
  spec.sojourn = Grid<SojournFamily>(4, 4);
  auto set = [&](int i, int j) {
    spec.P(i, j) = scale(spec.basis, "1");
    spec.T(i, j) = scale(spec.basis, "1");
  };
  set(0, 1);
  set(1, 0);
  set(2, 3);
  set(3, 2);
  auto diagnostics = validate(spec);
  CHECK(has_code(diagnostics, "not-strongly-connected"));
}

TEST_CASE("validate: missing transition time and missing tau") {
  RawSpec spec = tiny_raw();
  spec.T(1, 0) = AsymptoticScalar::zero();
  CHECK(has_code(validate(spec), "missing-time"));

  ReducedSpec reduced;
  reduced.states = {"1", "2"};
  reduced.P = Grid<AsymptoticScalar>(2, 2);
  reduced.P(0, 1) = scale(reduced.basis, "1");
  reduced.P(1, 0) = scale(reduced.basis, "1");
  reduced.tau = {scale(reduced.basis, "1"), AsymptoticScalar::zero()};
  reduced.sojourn.assign(2, SojournFamily{});
  CHECK(has_code(validate(reduced), "missing-time"));
}

TEST_CASE("sojourn families: variance over squared mean") {
  CHECK(SojournFamily{}.squared_cv() == 1.0);
  SojournFamily gamma{SojournKind::Gamma, Rational(4), 0.0};
  CHECK(gamma.squared_cv() == doctest::Approx(0.25));
  SojournFamily lognormal{SojournKind::LogNormal, Rational(1), 0.5};
  CHECK(lognormal.squared_cv() == doctest::Approx(std::exp(0.25) - 1.0));
}

TEST_CASE("reduce: 2-state example") {
  ReducedSpec reduced = reduce_to_extended(tiny_raw());
  REQUIRE(reduced.size() == 2);
  CHECK(reduced.states == std::vector<std::string>{"1->2", "2->1"});
  CHECK(reduced.P(0, 1) == AsymptoticScalar::one());
  CHECK(reduced.P(1, 0) == AsymptoticScalar::one());
  CHECK(reduced.P(0, 0).is_zero());
  CHECK(reduced.tau[0] == scale(reduced.basis, "1"));
  CHECK(reduced.tau[1] == scale(reduced.basis, "eps"));
  CHECK(reduced.pair_origin[0] == std::pair<std::string, std::string>{"1", "2"});
}

TEST_CASE("reduce: 3-state example, full pair kernel enumerated by hand") {
  RawSpec raw = three_state_raw();
  ReducedSpec reduced = reduce_to_extended(raw);
  // pairs in row-major order of the raw kernel
  REQUIRE(reduced.states ==
          std::vector<std::string>{"1->2", "1->3", "2->1", "3->1"});
  const AsymptoticScalar one = AsymptoticScalar::one();
  const AsymptoticScalar eps = scale(raw.basis, "eps");
  // (1,2) -> (2,1); (1,3) -> (3,1); (2,1) -> (1,2) and (1,3); (3,1) likewise
  Grid<AsymptoticScalar> expected(4, 4);
  expected(0, 2) = one;
  expected(1, 3) = one;
  expected(2, 0) = one;
  expected(2, 1) = eps;
  expected(3, 0) = one;
  expected(3, 1) = eps;
  CHECK(reduced.P == expected);
}

TEST_CASE("reduce: visited-class marginals cross-checked by Monte Carlo at eps=0.01") {
  RawSpec raw = three_state_raw();
  ReducedSpec reduced = reduce_to_extended(raw);
  const double eps = 0.01;

  // Exact embedded kernels at eps.
  auto embedded = [&](const Grid<AsymptoticScalar>& P, const ScaleBasis& basis) {
    std::vector<std::vector<double>> out(P.rows(), std::vector<double>(P.cols(), 0.0));
    for (int i = 0; i < P.rows(); ++i) {
      double sum = 0.0;
      for (int j = 0; j < P.cols(); ++j)
        if (!P(i, j).is_zero()) sum += (out[i][j] = evaluate(basis, P(i, j), eps));
      for (int j = 0; j < P.cols(); ++j) out[i][j] /= sum;
    }
    return out;
  };
  auto orig = embedded(raw.P, raw.basis);
  auto pair = embedded(reduced.P, reduced.basis);

  // Exact class marginal of the pair chain after `steps` jumps, started from
  // class 0 of the original process.
  const int steps = 4;
  std::vector<double> pair_dist(reduced.size(), 0.0);
  for (int s = 0; s < reduced.size(); ++s)
    if (reduced.pair_origin[s].first == "1") {
      for (int b = 0; b < raw.size(); ++b)
        if (raw.states[b] == reduced.pair_origin[s].second) pair_dist[s] = orig[0][b];
    }
  // after n kernel applications the pair state is (X_n, X_{n+1})
  for (int step = 1; step <= steps; ++step) {
    std::vector<double> next(reduced.size(), 0.0);
    for (int s = 0; s < reduced.size(); ++s)
      for (int t = 0; t < reduced.size(); ++t) next[t] += pair_dist[s] * pair[s][t];
    pair_dist = next;
  }
  std::vector<double> predicted(raw.size(), 0.0);
  for (int s = 0; s < reduced.size(); ++s)
    for (int b = 0; b < raw.size(); ++b)
      if (raw.states[b] == reduced.pair_origin[s].first) predicted[b] += pair_dist[s];

  // Monte Carlo on the original embedded chain.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const int paths = 200000;
  std::vector<int> counts(raw.size(), 0);
  for (int p = 0; p < paths; ++p) {
    int state = 0;
    for (int step = 0; step < steps; ++step) {
      double u = uniform(rng), acc = 0.0;
      for (int j = 0; j < raw.size(); ++j) {
        acc += orig[state][j];
        if (u <= acc) {
          state = j;
          break;
        }
      }
    }
    ++counts[state];
  }
  for (int b = 0; b < raw.size(); ++b) {
    double freq = static_cast<double>(counts[b]) / paths;
    double se = std::sqrt(std::max(predicted[b] * (1 - predicted[b]), 1e-12) / paths);
    CHECK(std::abs(freq - predicted[b]) <= 4 * se + 1e-9);
  }
}

TEST_CASE("reduce: pair row sums equal the destination row sums of the input") {
  RawSpec raw = three_state_raw();
  ReducedSpec reduced = reduce_to_extended(raw);
  for (int s = 0; s < reduced.size(); ++s) {
    std::vector<AsymptoticScalar> row;
    for (int t = 0; t < reduced.size(); ++t) row.push_back(reduced.P(s, t));
    int dest = -1;
    for (int b = 0; b < raw.size(); ++b)
      if (raw.states[b] == reduced.pair_origin[s].second) dest = b;
    std::vector<AsymptoticScalar> dest_row;
    for (int j = 0; j < raw.size(); ++j) dest_row.push_back(raw.P(dest, j));
    CHECK(add(row) == add(dest_row));
  }
}

TEST_CASE("reduce: identity adapter leaves a reduced spec unchanged") {
  ReducedSpec spec = preset_two_well_polynomial();
  ReducedSpec again = reduce_to_extended(spec);
  CHECK(again.P == spec.P);
  CHECK(again.tau == spec.tau);
  CHECK(again.states == spec.states);
}

TEST_CASE("reduce: rejects invalid input") {
  RawSpec spec = tiny_raw();
  spec.P(0, 0) = scale(spec.basis, "1");
  spec.T(0, 0) = scale(spec.basis, "1");
  CHECK_THROWS_AS(reduce_to_extended(spec), std::invalid_argument);
}

TEST_CASE("spec documents round-trip") {
  ReducedSpec spec = preset_two_well_polynomial();
  spec.sojourn[1] = SojournFamily{SojournKind::Gamma, Rational(3, 2), 0.0};
  spec.sojourn[2] = SojournFamily{SojournKind::LogNormal, Rational(1), 0.4};
  LoadedSpec loaded = parse_spec_document(spec_to_document(spec));
  REQUIRE(!loaded.is_raw());
  CHECK(loaded.reduced->P == spec.P);
  CHECK(loaded.reduced->tau == spec.tau);
  CHECK(loaded.reduced->states == spec.states);
  CHECK(loaded.reduced->sojourn == spec.sojourn);

  RawSpec raw = preset_heteroclinic_log();
  LoadedSpec loaded_raw = parse_spec_document(spec_to_document(raw));
  REQUIRE(loaded_raw.is_raw());
  CHECK(loaded_raw.raw->P == raw.P);
  CHECK(loaded_raw.raw->T == raw.T);

  // pair origins survive a reduced-document round-trip
  ReducedSpec reduced = reduce_to_extended(raw);
  LoadedSpec loaded_pairs = parse_spec_document(spec_to_document(reduced));
  CHECK(loaded_pairs.reduced->pair_origin == reduced.pair_origin);
}

TEST_CASE("spec documents: malformed input") {
  CHECK_THROWS_AS(parse_spec_document("not json"), SpecIoError);
  CHECK_THROWS_AS(parse_spec_document(R"({"mode":"odd","states":["a"],"transitions":[]})"),
                  SpecIoError);
  CHECK_THROWS_AS(
      parse_spec_document(
          R"({"mode":"reduced","states":["a","b"],"transitions":[
               {"from":"a","to":"b","p":"1","tau":"1"},
               {"from":"a","to":"b","p":"1","tau":"2"}]})"),
      SpecIoError);
  CHECK_THROWS_AS(load_spec_file("/nonexistent/path.json"), SpecIoError);
}
