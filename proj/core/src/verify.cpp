#include "metastab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "metastab/metastable.hpp"
#include "metastab/montecarlo.hpp"
#include "metastab/presets.hpp"
#include "metastab/report.hpp"

namespace metastab {

namespace {

int pick_workers(const VerifyOptions& options) {
  if (options.workers > 0) return options.workers;
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

std::string fmt(double v) { return format_double(v); }

// --- criterion 1: exact occupation law on single-rank specs ----------------

ReducedSpec three_cycle(const std::vector<std::string>& taus) {
  ReducedSpec spec;
  spec.states = {"1", "2", "3"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.sojourn.assign(3, SojournFamily{});
  auto scale = [&](const std::string& t) { return parse_scale(spec.basis, t); };
  spec.P(0, 1) = scale("1");
  spec.P(1, 2) = scale("1");
  spec.P(2, 0) = scale("1");
  for (const auto& t : taus) spec.tau.push_back(scale(t));
  return spec;
}

ReducedSpec asymmetric_three_state() {
  ReducedSpec spec;
  spec.states = {"1", "2", "3"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.sojourn.assign(3, SojournFamily{});
  auto scale = [&](const std::string& t) { return parse_scale(spec.basis, t); };
  spec.P(0, 1) = scale("1");
  spec.P(1, 0) = scale("1/2");
  spec.P(1, 2) = scale("1/2");
  spec.P(2, 0) = scale("1");
  spec.tau = {scale("1"), scale("2"), scale("4")};
  return spec;
}

// lambda(i) * c_i / sum, with c_i the finite limits of tau_i over the largest
// time scale: the limiting occupation law computed directly, outside the
// recursion it checks.
StateDistribution stationary_occupation_measure(const ReducedSpec& spec) {
  LimitMatrix limit = limit_matrix(spec.P);
  std::vector<int> everything(spec.size());
  for (int i = 0; i < spec.size(); ++i) everything[i] = i;
  InvariantMeasure lambda = invariant_measure(limit, everything);

  const AsymptoticScalar* max_tau = &spec.tau[0];
  for (const auto& tau : spec.tau)
    if (compare(tau, *max_tau) == Comparison::MuchLarger) max_tau = &tau;

  StateDistribution mu;
  Rational total = 0;
  for (int i = 0; i < spec.size(); ++i) {
    RatioLimit c = limit_ratio(spec.tau[i], *max_tau);
    if (!c.is_finite()) continue;
    Rational w = lambda[i] * c.value();
    if (w != 0) {
      mu[i] = w;
      total += w;
    }
  }
  for (auto& [state, mass] : mu) mass /= total;
  return mu;
}

CriterionResult criterion_ergodic_exactness() {
  std::vector<ReducedSpec> specs = {
      three_cycle({"1", "1/2", "1/3"}),
      asymmetric_three_state(),
      three_cycle({"1", "eps", "1"}),
  };
  for (auto& spec : specs) {
    ClusterTree tree = build_cluster_tree(spec);
    if (tree.top_rank() != 1)
      return {"1-ergodic-exactness", false, "fixture is not single-rank"};
    TimeScaleLattice lattice = build_lattice(tree);
    StateDistribution expected = stationary_occupation_measure(spec);
    AsymptoticScalar t =
        interval_representative(lattice, lattice.interval_count() - 1, spec.basis);
    for (int i = 0; i < spec.size(); ++i) {
      StateDistribution mu = metastable_distribution(tree, lattice, i, t);
      if (mu != expected)
        return {"1-ergodic-exactness", false,
                "metastable output differs from lambda*tau/sum(lambda*tau) for initial " +
                    spec.states[i]};
    }
  }
  return {"1-ergodic-exactness", true,
          "3 single-rank specs, exact rational match for every initial state"};
}

// --- criterion 2: two-state renewal ----------------------------------------

CriterionResult criterion_two_state_renewal(const VerifyOptions& options) {
  ReducedSpec spec = two_state_renewal();
  const double eps = 0.01;
  ConcreteKernel kernel = instantiate(spec, eps);
  OccupationResult occupation =
      occupation_distribution(kernel, 0, 100.0, 20000, options.seed, pick_workers(options));

  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  // t = 100 >> 1 at eps = 0.01: the top interval.
  StateDistribution mu = metastable_distribution(
      tree, lattice, 0, interval_representative(lattice, lattice.interval_count() - 1, spec.basis));

  double analytic = 1.0 / (1.0 + eps);
  double predicted = mu.count(0) ? mu[0].get_d() : 0.0;
  double freq = occupation.frequency[0];
  bool pass = std::abs(freq - analytic) <= 0.02 && std::abs(freq - predicted) <= 0.02;
  return {"2-two-state-renewal", pass,
          "slow-state occupancy " + fmt(freq) + " vs analytic " + fmt(analytic) +
              " and predicted " + fmt(predicted) + " (tol 0.02)"};
}

// --- criteria 3/4: oracle ratios on the two-well preset ---------------------

CriterionResult criterion_visit_count(const VerifyOptions& options) {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  const AsymptoticScalar& en = tree.visit_count(0, 1);
  std::vector<double> errors;
  std::ostringstream detail;
  for (double eps : options.oracle_eps_grid) {
    ConcreteKernel kernel = instantiate(spec, eps);
    double visits = oracle_visits(kernel, {0, 1}, 0)[0];
    double predicted = evaluate(spec.basis, en, eps);
    errors.push_back(std::abs(visits / predicted - 1.0));
    detail << " eps=" << fmt(eps) << ":" << fmt(errors.back());
  }
  bool decreasing = std::is_sorted(errors.rbegin(), errors.rend());
  bool pass = decreasing && errors.back() < 0.05;
  return {"3-visit-count-oracle", pass, "|oracle/EN - 1|:" + detail.str() + " (tol 0.05 at last)"};
}

CriterionResult criterion_mean_exit(const VerifyOptions& options) {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  const AsymptoticScalar& tau_a = tree.finite_time_scale(1, tree.cluster_of(0, 1));
  std::vector<double> errors;
  std::ostringstream detail;
  for (double eps : options.oracle_eps_grid) {
    ConcreteKernel kernel = instantiate(spec, eps);
    double exit = oracle_mean_exit(kernel, {0, 1}, 0);
    double predicted = evaluate(spec.basis, tau_a, eps);
    errors.push_back(std::abs(exit / predicted - 1.0));
    detail << " eps=" << fmt(eps) << ":" << fmt(errors.back());
  }
  bool decreasing = std::is_sorted(errors.rbegin(), errors.rend());
  bool pass = decreasing && errors.back() < 0.05;
  return {"4-mean-exit-oracle", pass, "|oracle/tau - 1|:" + detail.str() + " (tol 0.05 at last)"};
}

// --- criterion 5: exponential exit law --------------------------------------

CriterionResult criterion_exit_law(const VerifyOptions& options) {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  const AsymptoticScalar& tau_a = tree.finite_time_scale(1, tree.cluster_of(0, 1));
  std::vector<double> stats;
  std::ostringstream detail;
  for (double eps : {1e-1, 1e-2}) {
    ConcreteKernel kernel = instantiate(spec, eps);
    std::vector<double> samples =
        exit_time_samples(kernel, {0, 1}, 0, 10000, options.seed, pick_workers(options));
    stats.push_back(ks_vs_exp1(samples, evaluate(spec.basis, tau_a, eps)));
    detail << " eps=" << fmt(eps) << ":KS=" << fmt(stats.back());
  }
  bool pass = stats[1] < stats[0] && stats[1] < 0.05;
  return {"5-exponential-exit-law", pass, detail.str() + " (decreasing, tol 0.05 at eps=1e-2)"};
}

// --- criterion 6: hitting-distribution oracle -------------------------------

CriterionResult criterion_hitting(const VerifyOptions& options) {
  (void)options;
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  int cluster_a = tree.cluster_of(0, 1);
  int cluster_b = tree.cluster_of(2, 1);
  auto weights = tree.entry_weights(1, cluster_a, cluster_b);
  Rational predicted = weights.count(2) ? weights[2] : Rational(0);

  ConcreteKernel kernel = instantiate(spec, 1e-3);
  double landed_3 = oracle_hitting(kernel, {0, 1}, 0)[2];
  bool pass = predicted == 1 && std::abs(landed_3 - predicted.get_d()) < 0.01;
  return {"6-hitting-oracle", pass,
          "P(land in state 3) = " + fmt(landed_3) + " vs predicted " +
              rational_to_string(predicted) + " (tol 0.01)"};
}

// --- criterion 7: full-pipeline occupancy -----------------------------------

CriterionResult criterion_pipeline_occupancy(const VerifyOptions& options) {
  ReducedSpec spec = preset_two_well_polynomial();
  ClusterTree tree = build_cluster_tree(spec);
  TimeScaleLattice lattice = build_lattice(tree);
  std::vector<ReportEntry> entries = full_report(tree, lattice, 0);
  if (entries.size() != 4)
    return {"7-pipeline-occupancy", false, "two-well report does not have 4 intervals"};

  const std::vector<std::pair<int, double>> runs = {{0, 1e-2}, {1, 1e-3}, {2, 1e-3}};
  std::ostringstream detail;
  bool pass = true;
  for (const auto& [interval, eps] : runs) {
    ConcreteKernel kernel = instantiate(spec, eps);
    double t = evaluate(spec.basis, entries[interval].representative, eps);
    OccupationResult occupation =
        occupation_distribution(kernel, 0, t, 20000, options.seed, pick_workers(options));
    double worst = 0.0;
    for (int s = 0; s < spec.size(); ++s) {
      auto it = entries[interval].mu.find(s);
      double predicted = it == entries[interval].mu.end() ? 0.0 : it->second.get_d();
      worst = std::max(worst, std::abs(occupation.frequency[s] - predicted));
    }
    pass = pass && worst <= 0.03;
    detail << " interval" << interval << "@eps=" << fmt(eps) << ":maxerr=" << fmt(worst);
  }
  return {"7-pipeline-occupancy", pass, detail.str() + " (tol 0.03, N=20000)"};
}

// --- criterion 8: structural fuzz -------------------------------------------

// Random reduced spec over polynomial scales: a few limit cycles joined by
// weak links, occasionally a transient singleton group.
ReducedSpec random_reduced_spec(Xoshiro256& rng) {
  const int m = 3 + static_cast<int>(rng.next() % 6);  // 3..8
  ReducedSpec spec;
  for (int i = 0; i < m; ++i) spec.states.push_back(std::to_string(i + 1));
  spec.P = Grid<AsymptoticScalar>(m, m);
  spec.sojourn.assign(m, SojournFamily{});
  auto scale = [&](const std::string& t) { return parse_scale(spec.basis, t); };
  auto weak = [&] {
    int c = 1 + static_cast<int>(rng.next() % 3);
    int k = 1 + static_cast<int>(rng.next() % 3);
    return scale(std::to_string(c) + "*eps^" + std::to_string(k));
  };

  int groups = 1 + static_cast<int>(rng.next() % 3);
  groups = std::min(groups, m / 2);
  std::vector<std::vector<int>> group_members(std::max(groups, 1));
  for (int i = 0; i < m; ++i) group_members[i % group_members.size()].push_back(i);

  for (const auto& members : group_members) {
    if (members.size() == 1) continue;  // wired below as a transient-at-limit state
    for (size_t pos = 0; pos < members.size(); ++pos)
      spec.P(members[pos], members[(pos + 1) % members.size()]) = scale("1");
  }
  for (size_t g = 0; g < group_members.size(); ++g) {
    int from = group_members[g].front();
    int to = group_members[(g + 1) % group_members.size()].front();
    if (from != to && spec.P(from, to).is_zero())
      spec.P(from, to) = group_members[g].size() == 1 ? scale("1") : weak();
  }
  for (int extra = 0; extra < m; ++extra) {
    int i = static_cast<int>(rng.next() % m);
    int j = static_cast<int>(rng.next() % m);
    if (i != j && spec.P(i, j).is_zero()) spec.P(i, j) = weak();
  }
  // A single-member group still needs a leading-order way out.
  for (const auto& members : group_members)
    if (members.size() == 1) {
      int i = members.front();
      int j = (i + 1) % m;
      spec.P(i, j) = scale("1");
    }

  for (int i = 0; i < m; ++i) {
    int c = 1 + static_cast<int>(rng.next() % 3);
    int k = static_cast<int>(rng.next() % 3);
    spec.tau.push_back(scale(std::to_string(c) + (k > 0 ? "*inv_eps^" + std::to_string(k) : "")));
  }
  return spec;
}

// Second in-interval representative, distinct from the default one.
AsymptoticScalar alternate_representative(const TimeScaleLattice& lattice, int interval,
                                          const ScaleBasis& basis) {
  AsymptoticScalar first = interval_representative(lattice, interval, basis);
  int step_index = basis.index_of("inv_eps");
  if (step_index < 0) step_index = basis.size() - 1;
  const int n = static_cast<int>(lattice.classes.size());
  if (interval == 0)
    return mul(first, AsymptoticScalar(Rational(1), {{step_index, Rational(-1)}}));
  if (interval == n)
    return mul(first, AsymptoticScalar(Rational(1), {{step_index, Rational(1)}}));
  std::map<int, Rational> mean = lattice.classes[interval - 1].exponents();
  for (const auto& [index, power] : first.exponents()) mean[index] += power;
  for (auto& [index, power] : mean) power /= 2;
  return AsymptoticScalar(Rational(1), std::move(mean));
}

CriterionResult criterion_structural_fuzz(const VerifyOptions& options) {
  Xoshiro256 rng(options.seed ^ 0xF022DD00F022DD00ULL);
  const AsymptoticScalar one = AsymptoticScalar::one();
  for (int trial = 0; trial < 200; ++trial) {
    ReducedSpec spec = random_reduced_spec(rng);
    {
      ReducedSpec checked = spec;
      if (has_errors(validate(checked))) continue;  // generator avoids this, but stay safe
      spec = checked;
    }
    ClusterTree tree;
    try {
      tree = build_cluster_tree(spec);
    } catch (const std::exception& e) {
      return {"8-structural-fuzz", false,
              "hierarchy failed on trial " + std::to_string(trial) + ": " + e.what()};
    }

    for (int r = 0; r < tree.top_rank(); ++r) {
      const RankLevel& level = tree.level(r);
      if (r > 0 && tree.cluster_count(r) >= tree.cluster_count(r - 1))
        return {"8-structural-fuzz", false, "rank contraction violated"};
      for (int i = 0; i < level.kernel.rows(); ++i) {
        if (!level.kernel(i, i).is_zero())
          return {"8-structural-fuzz", false, "nonzero kernel diagonal"};
        std::vector<AsymptoticScalar> row;
        for (int j = 0; j < level.kernel.cols(); ++j) row.push_back(level.kernel(i, j));
        if (add(row) != one)
          return {"8-structural-fuzz", false, "kernel row does not leading-sum to 1"};
      }
      for (size_t c = 0; c < level.lambdas.size(); ++c) {
        const auto& cls = level.decomposition.closed_classes[c];
        const auto& lambda = level.lambdas[c];
        Rational total = 0;
        for (size_t col = 0; col < cls.size(); ++col) {
          Rational balance = 0;
          for (size_t row = 0; row < cls.size(); ++row)
            balance += lambda[row] * level.limit(cls[row], cls[col]);
          if (balance != lambda[col])
            return {"8-structural-fuzz", false, "lambda residual is not exactly zero"};
          total += lambda[col];
        }
        if (total != 1) return {"8-structural-fuzz", false, "lambda does not sum to 1"};
      }
      // Cross-cluster entries of every lower rank never dominate the
      // next-rank kernel entry they feed, and vanish against it whenever the
      // source chain passes a closed-class merge (transient promotions only
      // renormalize, so there the ratio may stay finite).
      if (r + 1 < tree.top_rank()) {
        const RankLevel& next = tree.level(r + 1);
        for (int k = 0; k < next.kernel.rows(); ++k)
          for (int l = 0; l < next.kernel.cols(); ++l) {
            if (k == l || next.kernel(k, l).is_zero()) continue;
            for (int s = 0; s <= r; ++s) {
              const RankLevel& low = tree.level(s);
              for (int a = 0; a < low.kernel.rows(); ++a)
                for (int b = 0; b < low.kernel.cols(); ++b) {
                  if (low.kernel(a, b).is_zero()) continue;
                  int base_a = low.clusters[a].members.front();
                  int base_b = low.clusters[b].members.front();
                  if (tree.cluster_of(base_a, r + 1) != k || tree.cluster_of(base_b, r + 1) != l)
                    continue;
                  bool through_closed_merge = false;
                  for (int t = s; t <= r; ++t) {
                    int ancestor = tree.cluster_of(base_a, t);
                    if (tree.level(t).decomposition.closed_class_of[ancestor] >= 0)
                      through_closed_merge = true;
                  }
                  RatioLimit ratio = limit_ratio(low.kernel(a, b), next.kernel(k, l));
                  if (ratio.is_infinite())
                    return {"8-structural-fuzz", false,
                            "lower-rank cross entry dominates the rank kernel"};
                  if (through_closed_merge && !ratio.is_zero())
                    return {"8-structural-fuzz", false,
                            "cross entry not negligible despite a closed-class merge"};
                }
            }
          }
      }
    }

    TimeScaleLattice lattice = build_lattice(tree);
    for (int i = 0; i < spec.size(); ++i) {
      std::vector<ReportEntry> entries = full_report(tree, lattice, i);
      for (const auto& entry : entries) {
        Rational total = 0;
        for (const auto& [state, mass] : entry.mu) total += mass;
        if (total != 1) return {"8-structural-fuzz", false, "reported mu does not sum to 1"};
        AsymptoticScalar second =
            alternate_representative(lattice, entry.interval, spec.basis);
        StateDistribution again = metastable_distribution(tree, lattice, i, second);
        if (again != entry.mu)
          return {"8-structural-fuzz", false, "mu not constant across an interval"};
      }
    }
  }
  return {"8-structural-fuzz", true, "200 random specs: contraction, rows, lambdas, mu checks"};
}

// --- criterion 9: reduction correctness -------------------------------------

RawSpec random_raw_spec(Xoshiro256& rng) {
  const int m = 3 + static_cast<int>(rng.next() % 3);  // 3..5
  RawSpec spec;
  for (int i = 0; i < m; ++i) spec.states.push_back(std::to_string(i + 1));
  spec.P = Grid<AsymptoticScalar>(m, m);
  spec.T = Grid<AsymptoticScalar>(m, m);
  spec.sojourn = Grid<SojournFamily>(m, m);
  auto scale = [&](const std::string& t) { return parse_scale(spec.basis, t); };
  for (int i = 0; i < m; ++i) {
    spec.P(i, (i + 1) % m) = scale("1");
    spec.T(i, (i + 1) % m) = scale("1");
  }
  for (int extra = 0; extra < m; ++extra) {
    int i = static_cast<int>(rng.next() % m);
    int j = static_cast<int>(rng.next() % m);
    if (i == j || !spec.P(i, j).is_zero()) continue;
    int c = 1 + static_cast<int>(rng.next() % 3);
    int k = 1 + static_cast<int>(rng.next() % 3);
    spec.P(i, j) = scale(std::to_string(c) + "*eps^" + std::to_string(k));
    spec.T(i, j) = scale("1");
  }
  return spec;
}

// Exact value at eps = 1/100 for integer inv_eps exponents.
Rational eval_at_hundredth(const ScaleBasis& basis, const AsymptoticScalar& s) {
  Rational value = s.coeff();
  int inv_eps = basis.index_of("inv_eps");
  for (const auto& [index, power] : s.exponents()) {
    if (index != inv_eps || power.get_den() != 1)
      throw std::logic_error("exact evaluation needs integer inv_eps powers");
    long k = power.get_num().get_si();
    mpz_class factor;
    mpz_ui_pow_ui(factor.get_mpz_t(), 100, static_cast<unsigned long>(std::abs(k)));
    if (k >= 0)
      value *= Rational(factor);
    else
      value /= Rational(factor);
  }
  return value;
}

Grid<Rational> exact_embedded_kernel(const ScaleBasis& basis, const Grid<AsymptoticScalar>& P) {
  Grid<Rational> out(P.rows(), P.cols(), Rational(0));
  for (int i = 0; i < P.rows(); ++i) {
    Rational row_sum = 0;
    for (int j = 0; j < P.cols(); ++j)
      if (!P(i, j).is_zero()) {
        out(i, j) = eval_at_hundredth(basis, P(i, j));
        row_sum += out(i, j);
      }
    for (int j = 0; j < P.cols(); ++j) out(i, j) /= row_sum;
  }
  return out;
}

CriterionResult criterion_reduction_correctness(const VerifyOptions& options) {
  Xoshiro256 rng(options.seed ^ 0x9ED0CE0000000009ULL);
  for (int trial = 0; trial < 20; ++trial) {
    RawSpec raw = random_raw_spec(rng);
    {
      RawSpec checked = raw;
      if (has_errors(validate(checked))) return {"9-reduction-correctness", false,
                                                 "generator produced an invalid raw spec"};
      raw = checked;
    }
    ReducedSpec reduced = reduce_to_extended(raw);

    Grid<Rational> orig = exact_embedded_kernel(raw.basis, raw.P);
    Grid<Rational> pair = exact_embedded_kernel(reduced.basis, reduced.P);

    // Pair-state lookup from original indices.
    const int m = raw.size();
    Grid<int> pair_index(m, m, -1);
    for (int s = 0; s < reduced.size(); ++s) {
      int a = -1, b = -1;
      for (int i = 0; i < m; ++i) {
        if (raw.states[i] == reduced.pair_origin[s].first) a = i;
        if (raw.states[i] == reduced.pair_origin[s].second) b = i;
      }
      pair_index(a, b) = s;
    }

    // Word identity: P(word) under the original chain equals the first-step
    // probability times the pair-path probability under the reduced chain.
    struct Frame {
      std::vector<int> word;
      Rational prob;
    };
    for (int start = 0; start < m; ++start) {
      std::vector<Frame> frontier = {{{start}, Rational(1)}};
      for (int depth = 0; depth < 5; ++depth) {
        std::vector<Frame> next;
        for (const auto& frame : frontier) {
          int tail = frame.word.back();
          for (int j = 0; j < m; ++j) {
            if (orig(tail, j) == 0) continue;
            Frame extended = frame;
            extended.word.push_back(j);
            extended.prob *= orig(tail, j);
            if (extended.word.size() >= 2) {
              Rational lifted = orig(extended.word[0], extended.word[1]);
              for (size_t k = 2; k < extended.word.size(); ++k) {
                int from = pair_index(extended.word[k - 2], extended.word[k - 1]);
                int to = pair_index(extended.word[k - 1], extended.word[k]);
                lifted *= pair(from, to);
              }
              if (lifted != extended.prob)
                return {"9-reduction-correctness", false,
                        "word probability mismatch on trial " + std::to_string(trial)};
            }
            next.push_back(std::move(extended));
          }
        }
        frontier = std::move(next);
      }
    }

    // Marginal check by matrix products: the n-step original distribution
    // equals the first-component marginal of the lifted pair distribution.
    for (int start = 0; start < m; ++start) {
      std::vector<Rational> orig_dist(m, Rational(0));
      orig_dist[start] = 1;
      std::vector<Rational> pair_dist(reduced.size(), Rational(0));
      for (int b = 0; b < m; ++b)
        if (orig(start, b) != 0) pair_dist[pair_index(start, b)] = orig(start, b);
      for (int step = 1; step <= 5; ++step) {
        std::vector<Rational> next_orig(m, Rational(0));
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) next_orig[j] += orig_dist[i] * orig(i, j);
        orig_dist = std::move(next_orig);
        std::vector<Rational> next_pair(reduced.size(), Rational(0));
        for (int s = 0; s < reduced.size(); ++s)
          for (int t = 0; t < reduced.size(); ++t)
            if (pair(s, t) != 0) next_pair[t] += pair_dist[s] * pair(s, t);
        pair_dist = std::move(next_pair);
        std::vector<Rational> marginal(m, Rational(0));
        for (int s = 0; s < reduced.size(); ++s) {
          int first = -1;
          for (int i = 0; i < m; ++i)
            if (raw.states[i] == reduced.pair_origin[s].first) first = i;
          marginal[first] += pair_dist[s];
        }
        if (marginal != orig_dist)
          return {"9-reduction-correctness", false,
                  "marginal mismatch at step " + std::to_string(step)};
      }
    }
  }
  return {"9-reduction-correctness", true,
          "20 random raw specs, exact word and marginal agreement at eps=1/100"};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_battery(const VerifyOptions& options) {
  std::vector<std::function<CriterionResult()>> criteria = {
      [&] { return criterion_ergodic_exactness(); },
      [&] { return criterion_two_state_renewal(options); },
      [&] { return criterion_visit_count(options); },
      [&] { return criterion_mean_exit(options); },
      [&] { return criterion_exit_law(options); },
      [&] { return criterion_hitting(options); },
      [&] { return criterion_pipeline_occupancy(options); },
      [&] { return criterion_structural_fuzz(options); },
      [&] { return criterion_reduction_correctness(options); },
  };
  std::vector<CriterionResult> results;
  for (auto& criterion : criteria) {
    auto start = std::chrono::steady_clock::now();
    CriterionResult result = criterion();
    result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(result));
  }
  return results;
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.passed) return false;
  return true;
}

std::string verify_table(const std::vector<CriterionResult>& results) {
  std::ostringstream out;
  for (const auto& r : results)
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
  out << (all_passed(results) ? "all criteria passed\n" : "criteria failed\n");
  return out.str();
}

std::string verify_document_json(const std::vector<CriterionResult>& results) {
  nlohmann::json doc;
  doc["tool"] = {{"name", "metastab"}, {"version", "0.1.0"}};
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : results)
    rows.push_back({{"name", r.name}, {"pass", r.passed}, {"detail", r.detail}});
  doc["criteria"] = rows;
  doc["pass"] = all_passed(results);
  return doc.dump(2) + "\n";
}

}  // namespace metastab
