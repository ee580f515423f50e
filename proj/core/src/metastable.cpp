#include "metastab/metastable.hpp"

#include <algorithm>
#include <stdexcept>

namespace metastab {

namespace {

// Scale mixtures of exact distributions.
void mix_into(StateDistribution& accumulator, const Rational& weight,
              const StateDistribution& part) {
  for (const auto& [state, mass] : part) accumulator[state] += weight * mass;
}

Rational total_mass(const StateDistribution& mu) {
  Rational total = 0;
  for (const auto& [state, mass] : mu) total += mass;
  return total;
}

}  // namespace

TimeScaleLattice build_lattice(const ClusterTree& tree) {
  struct Entry {
    AsymptoticScalar tau;
    std::pair<int, int> origin;
  };
  std::vector<Entry> entries;
  for (int r = 0; r < tree.top_rank(); ++r)
    for (int k = 0; k < tree.cluster_count(r); ++k)
      entries.push_back({tree.finite_time_scale(r, k), {r, k}});

  TimeScaleLattice lattice;
  for (const auto& entry : entries) {
    bool placed = false;
    for (size_t c = 0; c < lattice.classes.size(); ++c) {
      if (commensurate(entry.tau, lattice.classes[c])) {
        if (entry.origin < lattice.representative_of[c]) {
          lattice.representative_of[c] = entry.origin;
          lattice.classes[c] = entry.tau;
        }
        placed = true;
        break;
      }
    }
    if (!placed) {
      lattice.classes.push_back(entry.tau);
      lattice.representative_of.push_back(entry.origin);
    }
  }

  std::vector<size_t> order(lattice.classes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return compare(lattice.classes[a], lattice.classes[b]) == Comparison::MuchSmaller;
  });
  TimeScaleLattice sorted;
  for (size_t i : order) {
    sorted.classes.push_back(lattice.classes[i]);
    sorted.representative_of.push_back(lattice.representative_of[i]);
  }
  return sorted;
}

TimeClassification classify_time(const TimeScaleLattice& lattice, const AsymptoticScalar& t) {
  if (t.is_zero()) throw std::domain_error("classify_time needs a nonzero scale");
  for (size_t c = 0; c < lattice.classes.size(); ++c) {
    switch (compare(t, lattice.classes[c])) {
      case Comparison::Commensurate:
        return {true, static_cast<int>(c)};
      case Comparison::MuchSmaller:
        return {false, static_cast<int>(c)};
      case Comparison::MuchLarger:
        break;
    }
  }
  return {false, static_cast<int>(lattice.classes.size())};
}

StateDistribution internal_equilibrium(const ClusterTree& tree, int rank, int cluster) {
  const auto& members = tree.level(rank).clusters[cluster].members;
  if (members.size() == 1) return {{members.front(), Rational(1)}};

  // Largest rank below `rank` where this cluster splits into >= 2 subclusters.
  int split_rank = -1;
  std::vector<int> subclusters;
  for (int r = rank - 1; r >= 0; --r) {
    std::vector<int> seen;
    for (int b : members) {
      int c = tree.cluster_of(b, r);
      if (std::find(seen.begin(), seen.end(), c) == seen.end()) seen.push_back(c);
    }
    if (seen.size() >= 2) {
      split_rank = r;
      std::sort(seen.begin(), seen.end());
      subclusters = std::move(seen);
      break;
    }
  }
  if (split_rank < 0) throw std::logic_error("multi-state cluster never splits");

  const RankLevel& level = tree.level(split_rank);
  int cls = level.decomposition.closed_class_of[subclusters.front()];
  if (cls < 0 || level.decomposition.closed_classes[cls] != subclusters)
    throw std::logic_error("split subclusters do not form one closed class");
  const InvariantMeasure& lambda = level.lambdas[cls];

  const AsymptoticScalar* max_tau = &tree.finite_time_scale(split_rank, subclusters.front());
  for (int l : subclusters) {
    const AsymptoticScalar& tau = tree.finite_time_scale(split_rank, l);
    if (compare(tau, *max_tau) == Comparison::MuchLarger) max_tau = &tau;
  }

  std::vector<Rational> weight(subclusters.size(), Rational(0));
  Rational total = 0;
  for (size_t pos = 0; pos < subclusters.size(); ++pos) {
    RatioLimit c = limit_ratio(tree.finite_time_scale(split_rank, subclusters[pos]), *max_tau);
    if (c.is_finite()) {
      weight[pos] = lambda[pos] * c.value();
      total += weight[pos];
    }
  }

  StateDistribution mu;
  for (size_t pos = 0; pos < subclusters.size(); ++pos) {
    if (weight[pos] == 0) continue;
    mix_into(mu, weight[pos] / total, internal_equilibrium(tree, split_rank, subclusters[pos]));
  }
  return mu;
}

namespace {

// Hitting distribution over base states for the absorbing refinement chain of
// Case 2: transient rank-r clusters E with limit transitions among siblings,
// absorption into base states of E' clusters via entry weights.
StateDistribution case2_hitting(const ClusterTree& tree, int rank, const std::vector<int>& siblings,
                                const std::vector<bool>& is_fast, int start_cluster) {
  const RankLevel& level = tree.level(rank);

  std::vector<int> fast;  // clusters mixed well before t
  for (size_t pos = 0; pos < siblings.size(); ++pos)
    if (is_fast[pos]) fast.push_back(siblings[pos]);
  std::vector<int> position_of(tree.cluster_count(rank), -1);
  for (size_t pos = 0; pos < fast.size(); ++pos) position_of[fast[pos]] = static_cast<int>(pos);

  // Absorbing base states and per-transient-row absorption masses.
  std::vector<int> absorbing;
  std::vector<std::map<int, Rational>> absorb_mass(fast.size());
  for (size_t pos = 0; pos < fast.size(); ++pos) {
    int k = fast[pos];
    for (int l : siblings) {
      if (position_of[l] >= 0 || l == k) continue;  // only slow targets absorb
      const Rational& p = level.limit(k, l);
      if (p == 0) continue;
      for (const auto& [base, w] : tree.entry_weights(rank, k, l)) {
        if (std::find(absorbing.begin(), absorbing.end(), base) == absorbing.end())
          absorbing.push_back(base);
        absorb_mass[pos][base] += p * w;
      }
    }
  }
  std::sort(absorbing.begin(), absorbing.end());

  const int n = static_cast<int>(fast.size());
  Grid<Rational> system(n, n, Rational(0));
  for (int row = 0; row < n; ++row) {
    system(row, row) = 1;
    for (int col = 0; col < n; ++col) {
      const Rational& q = level.limit(fast[row], fast[col]);
      if (q != 0) system(row, col) -= q;
    }
  }

  StateDistribution hitting;
  int start_pos = position_of[start_cluster];
  for (int base : absorbing) {
    std::vector<Rational> b(n, Rational(0));
    for (int row = 0; row < n; ++row) {
      auto it = absorb_mass[row].find(base);
      if (it != absorb_mass[row].end()) b[row] = it->second;
    }
    std::vector<Rational> h = solve_rational(system, std::move(b));
    if (h[start_pos] != 0) hitting[base] = h[start_pos];
  }
  if (total_mass(hitting) != 1)
    throw std::logic_error("Case-2 hitting distribution does not sum to 1");
  return hitting;
}

StateDistribution resolve(const ClusterTree& tree, int initial, const AsymptoticScalar& t,
                          int rank_bound) {
  const AsymptoticScalar& base_tau = tree.spec().tau[initial];
  if (compare(t, base_tau) == Comparison::MuchSmaller)
    return {{initial, Rational(1)}};

  const int top = tree.top_rank();
  int rank = -1;
  for (int r = 0; r < top; ++r) {
    Comparison c = compare(t, tree.finite_time_scale(r, tree.cluster_of(initial, r)));
    if (c == Comparison::Commensurate)
      throw std::logic_error("commensurate scale escaped classification");
    if (c != Comparison::MuchLarger) break;
    rank = r;
  }
  if (rank < 0) throw std::logic_error("resolution found no rank despite t >> tau_i");
  if (rank >= rank_bound) throw std::logic_error("Case-2 recursion failed to decrease the rank");

  const RankLevel& level = tree.level(rank);
  int home = tree.cluster_of(initial, rank);
  int cls = level.decomposition.closed_class_of[home];
  if (cls < 0)
    throw std::logic_error("maximal rank landed on a transient cluster");
  const std::vector<int>& siblings = level.decomposition.closed_classes[cls];
  const InvariantMeasure& lambda = level.lambdas[cls];

  std::vector<bool> is_fast(siblings.size(), false);
  bool any_slow = false;
  for (size_t pos = 0; pos < siblings.size(); ++pos) {
    Comparison c = compare(t, tree.finite_time_scale(rank, siblings[pos]));
    if (c == Comparison::Commensurate)
      throw std::logic_error("commensurate sibling scale escaped classification");
    is_fast[pos] = (c == Comparison::MuchLarger);
    any_slow = any_slow || !is_fast[pos];
  }

  if (!any_slow) {
    // Case 1: the whole class mixes; weight siblings by lambda and the tau
    // ratio limits, then settle each into its internal equilibrium.
    const AsymptoticScalar* max_tau = &tree.finite_time_scale(rank, siblings.front());
    for (int k : siblings) {
      const AsymptoticScalar& tau = tree.finite_time_scale(rank, k);
      if (compare(tau, *max_tau) == Comparison::MuchLarger) max_tau = &tau;
    }
    std::vector<Rational> weight(siblings.size(), Rational(0));
    Rational total = 0;
    for (size_t pos = 0; pos < siblings.size(); ++pos) {
      RatioLimit c = limit_ratio(tree.finite_time_scale(rank, siblings[pos]), *max_tau);
      if (c.is_finite()) {
        weight[pos] = lambda[pos] * c.value();
        total += weight[pos];
      }
    }
    StateDistribution mu;
    for (size_t pos = 0; pos < siblings.size(); ++pos) {
      if (weight[pos] == 0) continue;
      mix_into(mu, weight[pos] / total, internal_equilibrium(tree, rank, siblings[pos]));
    }
    return mu;
  }

  // Case 2: the process leaves the fast region and lands on a base state of a
  // slow cluster; resolve each landing point at a strictly smaller rank.
  StateDistribution hitting = case2_hitting(tree, rank, siblings, is_fast, home);
  StateDistribution mu;
  for (const auto& [base, mass] : hitting)
    mix_into(mu, mass, resolve(tree, base, t, rank));
  return mu;
}

}  // namespace

StateDistribution metastable_distribution(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                          int initial, const AsymptoticScalar& t) {
  TimeClassification location = classify_time(lattice, t);
  if (location.is_commensurate)
    throw CommensurateTimeError(to_string(tree.spec().basis, lattice.classes[location.index]));
  StateDistribution mu = resolve(tree, initial, t, tree.top_rank() + 1);
  if (total_mass(mu) != 1)
    throw std::logic_error("metastable distribution does not sum to 1");
  return mu;
}

AsymptoticScalar interval_representative(const TimeScaleLattice& lattice, int interval,
                                         const ScaleBasis& basis) {
  const int n = static_cast<int>(lattice.classes.size());
  if (n == 0 || interval < 0 || interval > n)
    throw std::domain_error("interval index outside the lattice tiling");

  int step_index = basis.index_of("inv_eps");
  if (step_index < 0) step_index = basis.size() - 1;  // weakest generator
  auto one_step = [&](const Rational& direction) {
    std::map<int, Rational> exps{{step_index, direction}};
    return AsymptoticScalar(Rational(1), std::move(exps));
  };

  if (interval == 0) return mul(lattice.classes.front(), one_step(Rational(-1)));
  if (interval == n) return mul(lattice.classes.back(), one_step(Rational(1)));

  const auto& lo = lattice.classes[interval - 1].exponents();
  const auto& hi = lattice.classes[interval].exponents();
  std::map<int, Rational> mean = lo;
  for (const auto& [index, power] : hi) mean[index] += power;
  for (auto& [index, power] : mean) power /= 2;
  return AsymptoticScalar(Rational(1), std::move(mean));
}

std::vector<ReportEntry> full_report(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                     int initial) {
  std::vector<ReportEntry> entries;
  const int n = static_cast<int>(lattice.classes.size());
  for (int interval = 0; interval <= n; ++interval) {
    ReportEntry entry;
    entry.interval = interval;
    entry.lower = interval == 0 ? AsymptoticScalar::zero() : lattice.classes[interval - 1];
    entry.upper_infinite = (interval == n);
    if (!entry.upper_infinite) entry.upper = lattice.classes[interval];
    entry.representative = interval_representative(lattice, interval, tree.spec().basis);
    entry.mu = metastable_distribution(tree, lattice, initial, entry.representative);
    entries.push_back(std::move(entry));
  }
  return entries;
}

}  // namespace metastab
