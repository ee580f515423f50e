#include "doctest.h"
#include "metastab/metastable.hpp"
#include "metastab/model.hpp"
#include "metastab/presets.hpp"

using namespace metastab;

namespace {

AsymptoticScalar scale(const ScaleBasis& basis, const std::string& text) {
  return parse_scale(basis, text);
}

StateDistribution dist(std::initializer_list<std::pair<int, Rational>> masses) {
  StateDistribution mu;
  for (const auto& [state, mass] : masses) mu[state] = mass;
  return mu;
}

ReducedSpec uniform_two_cycle() {
  ReducedSpec spec;
  spec.states = {"1", "2"};
  spec.P = Grid<AsymptoticScalar>(2, 2);
  spec.P(0, 1) = AsymptoticScalar::one();
  spec.P(1, 0) = AsymptoticScalar::one();
  spec.tau.assign(2, AsymptoticScalar::one());
  spec.sojourn.assign(2, SojournFamily{});
  return spec;
}

}  // namespace

TEST_CASE("lattice: two-well classes and representatives") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  REQUIRE(lattice.classes.size() == 3);
  CHECK(lattice.classes[0] == scale(spec.basis, "1"));
  CHECK(lattice.classes[1] == scale(spec.basis, "2*inv_eps"));
  CHECK(lattice.classes[2] == scale(spec.basis, "2*inv_eps^2"));
  CHECK(lattice.representative_of[0] == std::pair<int, int>{0, 0});
  CHECK(lattice.representative_of[1] == std::pair<int, int>{1, 0});
  CHECK(lattice.representative_of[2] == std::pair<int, int>{1, 1});
}

TEST_CASE("lattice: two-state scales and the single-class case") {
  ReducedSpec renewal = two_state_renewal();
  ClusterTree tree = build_cluster_tree(renewal);
  TimeScaleLattice lattice = build_lattice(tree);
  REQUIRE(lattice.classes.size() == 2);
  CHECK(lattice.classes[0] == scale(renewal.basis, "eps"));
  CHECK(lattice.classes[1] == scale(renewal.basis, "1"));

  ReducedSpec flat = uniform_two_cycle();
  ClusterTree flat_tree = build_cluster_tree(flat);
  TimeScaleLattice flat_lattice = build_lattice(flat_tree);
  CHECK(flat_lattice.classes.size() == 1);
}

TEST_CASE("classify_time locates intervals and refuses nothing by itself") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);

  TimeClassification mid = classify_time(lattice, scale(spec.basis, "inv_eps^1/2"));
  CHECK(!mid.is_commensurate);
  CHECK(mid.index == 1);  // between 1 and 2/eps

  TimeClassification on_scale = classify_time(lattice, scale(spec.basis, "3*inv_eps"));
  CHECK(on_scale.is_commensurate);
  CHECK(on_scale.index == 1);

  TimeClassification beyond = classify_time(lattice, scale(spec.basis, "inv_eps^3"));
  CHECK(!beyond.is_commensurate);
  CHECK(beyond.index == 3);

  CHECK_THROWS(classify_time(lattice, AsymptoticScalar::zero()));
}

TEST_CASE("internal equilibrium: point masses, symmetry, c-weights") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  CHECK(internal_equilibrium(tree, 0, 2) == dist({{2, Rational(1)}}));
  CHECK(internal_equilibrium(tree, 1, 0) ==
        dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));

  // tau = (1, eps): the slow state soaks up the whole equilibrium
  ReducedSpec renewal = two_state_renewal();
  ClusterTree renewal_tree = build_cluster_tree(renewal);
  CHECK(internal_equilibrium(renewal_tree, 1, 0) == dist({{0, Rational(1)}}));
}

TEST_CASE("metastable distribution: the two-well windows") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);

  CHECK(metastable_distribution(tree, lattice, 0, scale(spec.basis, "inv_eps^1/2")) ==
        dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  CHECK(metastable_distribution(tree, lattice, 0, scale(spec.basis, "inv_eps^3/2")) ==
        dist({{2, Rational(1, 2)}, {3, Rational(1, 2)}}));
  // below every scale: stay put
  CHECK(metastable_distribution(tree, lattice, 0, scale(spec.basis, "eps")) ==
        dist({{0, Rational(1)}}));
  CHECK(metastable_distribution(tree, lattice, 3, scale(spec.basis, "eps^2")) ==
        dist({{3, Rational(1)}}));

  CHECK_THROWS_AS(metastable_distribution(tree, lattice, 0, scale(spec.basis, "3*inv_eps")),
                  CommensurateTimeError);
}

TEST_CASE("full report: frozen 2-state trace") {
  ReducedSpec spec = two_state_renewal();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  // initial state is the fast one (index 1, tau = eps)
  std::vector<ReportEntry> entries = full_report(tree, lattice, 1);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].mu == dist({{1, Rational(1)}}));
  CHECK(entries[1].mu == dist({{0, Rational(1)}}));
  CHECK(entries[2].mu == dist({{0, Rational(1)}}));
  CHECK(entries[0].lower.is_zero());
  CHECK(entries[2].upper_infinite);
}

TEST_CASE("full report: two-well tiling with four intervals") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  std::vector<ReportEntry> entries = full_report(tree, lattice, 0);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0].mu == dist({{0, Rational(1)}}));
  CHECK(entries[1].mu == dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
  CHECK(entries[2].mu == dist({{2, Rational(1, 2)}, {3, Rational(1, 2)}}));
  CHECK(entries[3].mu == dist({{2, Rational(1, 2)}, {3, Rational(1, 2)}}));
}

TEST_CASE("full report: single-scale spec settles into the top equilibrium") {
  ReducedSpec spec = uniform_two_cycle();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  std::vector<ReportEntry> entries = full_report(tree, lattice, 0);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].mu == dist({{0, Rational(1)}}));
  CHECK(entries[1].mu == dist({{0, Rational(1, 2)}, {1, Rational(1, 2)}}));
}

TEST_CASE("representatives stay strictly inside their intervals") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  for (int interval = 0; interval < lattice.interval_count(); ++interval) {
    AsymptoticScalar t = interval_representative(lattice, interval, spec.basis);
    TimeClassification location = classify_time(lattice, t);
    CHECK(!location.is_commensurate);
    CHECK(location.index == interval);
  }
}

TEST_CASE("mu is constant across each interval") {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  // two different in-interval scales per interval, all initial states
  std::vector<std::vector<std::string>> probes = {
      {"eps", "eps^5"},
      {"inv_eps^1/2", "7*inv_eps^2/3"},
      {"inv_eps^3/2", "inv_eps^1.75"},
      {"inv_eps^3", "9*inv_eps^4"},
  };
  for (int interval = 0; interval < 4; ++interval) {
    for (int i = 0; i < spec.size(); ++i) {
      StateDistribution first = metastable_distribution(
          tree, lattice, i, scale(spec.basis, probes[interval][0]));
      StateDistribution second = metastable_distribution(
          tree, lattice, i, scale(spec.basis, probes[interval][1]));
      CHECK(first == second);
    }
  }
}

TEST_CASE("single-rank specs reproduce the lambda-tau occupation measure exactly") {
  ReducedSpec spec;
  spec.states = {"1", "2", "3"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.sojourn.assign(3, SojournFamily{});
  auto s = [&](const std::string& t) { return scale(spec.basis, t); };
  spec.P(0, 1) = s("1");
  spec.P(1, 2) = s("1");
  spec.P(2, 0) = s("1");
  spec.tau = {s("1"), s("1/2"), s("1/3")};
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  StateDistribution expected =
      dist({{0, Rational(6, 11)}, {1, Rational(3, 11)}, {2, Rational(2, 11)}});
  for (int i = 0; i < 3; ++i)
    CHECK(metastable_distribution(tree, lattice, i, s("inv_eps")) == expected);
}

TEST_CASE("log-corrected raw family: full pipeline trace") {
  // Raw 3-state family with times V*ln(1/eps)*eps^-gamma; after reduction the
  // pair states are (A,B),(A,C),(B,A),(B,C),(C,A) with one transient pair.
  ReducedSpec spec = reduce_to_extended(preset_heteroclinic_log());
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);

  auto s = [&](const std::string& t) { return scale(spec.basis, t); };
  REQUIRE(tree.top_rank() == 2);
  REQUIRE(lattice.classes.size() == 4);
  CHECK(lattice.classes[0] == s("log_inv_eps"));
  CHECK(lattice.classes[1] == s("2*inv_eps*log_inv_eps"));
  CHECK(lattice.classes[2] == s("inv_eps^2*log_inv_eps"));
  CHECK(lattice.classes[3] == s("1/2*inv_eps^3*log_inv_eps"));

  const int ab = 0, ac = 1, ca = 4;
  REQUIRE(spec.states[ab] == "A->B");
  REQUIRE(spec.states[ac] == "A->C");
  REQUIRE(spec.states[ca] == "C->A");

  // From (A,B): below the base scale the process holds; on every longer
  // window the mass sits on the slow pair (C,A). The lattice is finer than
  // the mu-change points, so consecutive intervals repeat the measure.
  std::vector<ReportEntry> entries = full_report(tree, lattice, ab);
  REQUIRE(entries.size() == 5);
  CHECK(entries[0].mu == dist({{ab, Rational(1)}}));
  for (int interval = 1; interval <= 4; ++interval)
    CHECK(entries[interval].mu == dist({{ca, Rational(1)}}));

  // From the transient pair (A,C) the long in-transit time keeps the mass in
  // place across the first two windows.
  CHECK(metastable_distribution(tree, lattice, ac, s("inv_eps")) ==
        dist({{ac, Rational(1)}}));
}

TEST_CASE("case-2 landings compose with deeper resolutions") {
  // Asymmetric wells: entering well B lands on state 3 and then spreads to
  // the in-well equilibrium only once the window allows it.
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  // From state 4 in the slow well, a window far below the B exit but above
  // the base scales mixes well B only.
  CHECK(metastable_distribution(tree, lattice, 3, scale(spec.basis, "inv_eps^1/2")) ==
        dist({{2, Rational(1, 2)}, {3, Rational(1, 2)}}));
}
