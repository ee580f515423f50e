#include "metastab/hierarchy.hpp"

#include <algorithm>
#include <stdexcept>

namespace metastab {

namespace {

// Deterministic cluster order: by smallest base member.
std::vector<Cluster> next_rank_clusters(const RankLevel& level,
                                        std::vector<int>& parent_of_current) {
  const auto& decomposition = level.decomposition;
  std::vector<std::vector<int>> groups;
  for (const auto& closed : decomposition.closed_classes) {
    std::vector<int> members;
    for (int c : closed)
      for (int b : level.clusters[c].members) members.push_back(b);
    std::sort(members.begin(), members.end());
    groups.push_back(std::move(members));
  }
  for (int t : decomposition.transient) groups.push_back(level.clusters[t].members);
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<Cluster> clusters;
  clusters.reserve(groups.size());
  for (auto& g : groups) clusters.push_back(Cluster{std::move(g)});

  parent_of_current.assign(level.clusters.size(), -1);
  for (size_t k = 0; k < clusters.size(); ++k)
    for (int b : clusters[k].members) {
      int current = level.cluster_of_base[b];
      parent_of_current[current] = static_cast<int>(k);
    }
  return clusters;
}

// lambda over the members of a cluster's ergodic class, or a point mass for a
// transient singleton. Indexing follows `indices`.
void class_of_cluster(const RankLevel& level, int cluster, std::vector<int>& indices,
                      InvariantMeasure& lambda) {
  int cls = level.decomposition.closed_class_of[cluster];
  if (cls >= 0) {
    indices = level.decomposition.closed_classes[cls];
    lambda = level.lambdas[cls];
  } else {
    indices = {cluster};
    lambda = {Rational(1)};
  }
}

}  // namespace

const AsymptoticScalar& ClusterTree::visit_count(int base_state, int rank) const {
  if (rank < 0 || rank >= top_rank())
    throw std::domain_error("visit_count needs 0 <= rank < top rank");
  return visits_(base_state, rank);
}

bool ClusterTree::time_scale(int rank, int cluster, AsymptoticScalar& out) const {
  if (rank == top_rank()) return false;
  out = levels_[rank].tau[cluster];
  return true;
}

const AsymptoticScalar& ClusterTree::finite_time_scale(int rank, int cluster) const {
  if (rank == top_rank())
    throw std::domain_error("the top-rank time scale is infinite");
  return levels_[rank].tau[cluster];
}

std::map<int, Rational> ClusterTree::entry_weights(int rank, int source_cluster,
                                                   int target_cluster) const {
  if (source_cluster == target_cluster)
    throw std::domain_error("entry_weights needs distinct clusters");
  const RankLevel& level = levels_[rank];
  if (level.kernel.empty() || level.kernel(source_cluster, target_cluster).is_zero())
    throw std::domain_error("entry_weights needs a nonzero rank kernel entry");

  const auto& sources = level.clusters[source_cluster].members;
  const auto& targets = level.clusters[target_cluster].members;

  auto weighted_flow = [&](int target_base) {
    std::vector<AsymptoticScalar> terms;
    for (int a : sources) {
      const AsymptoticScalar& edge = spec_.P(a, target_base);
      if (edge.is_zero()) continue;
      terms.push_back(mul(visits_(a, rank), edge));
    }
    return add(terms);
  };

  std::vector<AsymptoticScalar> flows;
  std::vector<AsymptoticScalar> all;
  for (int j : targets) {
    flows.push_back(weighted_flow(j));
    if (!flows.back().is_zero()) all.push_back(flows.back());
  }
  AsymptoticScalar denominator = add(all);
  if (denominator.is_zero())
    throw std::domain_error("entry_weights denominator is Zero despite the kernel entry");

  std::map<int, Rational> weights;
  for (size_t pos = 0; pos < targets.size(); ++pos) {
    if (flows[pos].is_zero()) continue;
    RatioLimit limit = limit_ratio(flows[pos], denominator);
    if (limit.is_finite()) weights[targets[pos]] = limit.value();
  }
  return weights;
}

ClusterTree build_cluster_tree(const ReducedSpec& spec) {
  ReducedSpec checked = spec;
  auto diagnostics = validate(checked);
  if (has_errors(diagnostics))
    throw std::invalid_argument("build_cluster_tree on an invalid spec: " +
                                diagnostics.front().message);

  const int m = checked.size();
  ClusterTree tree;
  tree.spec_ = checked;

  RankLevel base;
  base.clusters.resize(m);
  base.cluster_of_base.resize(m);
  for (int i = 0; i < m; ++i) {
    base.clusters[i].members = {i};
    base.cluster_of_base[i] = i;
  }
  base.kernel = checked.P;
  base.tau = checked.tau;
  tree.levels_.push_back(std::move(base));

  while (tree.levels_.back().clusters.size() > 1) {
    RankLevel& level = tree.levels_.back();
    if (static_cast<int>(tree.levels_.size()) > m)
      throw std::logic_error("hierarchy exceeded the rank bound R <= M");

    level.limit = limit_matrix(level.kernel);
    level.decomposition = ergodic_decomposition(level.limit);
    for (const auto& closed : level.decomposition.closed_classes)
      level.lambdas.push_back(invariant_measure(level.limit, closed));

    RankLevel next;
    next.clusters = next_rank_clusters(level, level.parent);
    if (next.clusters.size() >= level.clusters.size())
      throw std::logic_error("rank failed to contract strictly");
    next.cluster_of_base.assign(m, -1);
    for (size_t k = 0; k < next.clusters.size(); ++k)
      for (int b : next.clusters[k].members) next.cluster_of_base[b] = static_cast<int>(k);

    const int mr = static_cast<int>(level.clusters.size());
    const int mn = static_cast<int>(next.clusters.size());
    if (mn > 1) {
      next.kernel = Grid<AsymptoticScalar>(mn, mn);
      for (int k = 0; k < mn; ++k) {
        // Representative current-rank cluster inside k, plus its class data.
        int inside = level.cluster_of_base[next.clusters[k].members.front()];
        std::vector<int> indices;
        InvariantMeasure lambda;
        class_of_cluster(level, inside, indices, lambda);

        std::vector<AsymptoticScalar> exits;
        std::vector<std::vector<AsymptoticScalar>> flows(mn);
        for (size_t pos = 0; pos < indices.size(); ++pos) {
          AsymptoticScalar weight(lambda[pos]);
          for (int j = 0; j < mr; ++j) {
            if (level.kernel(indices[pos], j).is_zero()) continue;
            if (level.parent[j] == k) continue;
            AsymptoticScalar term = mul(weight, level.kernel(indices[pos], j));
            exits.push_back(term);
            flows[level.parent[j]].push_back(term);
          }
        }
        AsymptoticScalar denominator = add(exits);
        if (denominator.is_zero())
          throw std::logic_error("closed class with no exits below the top rank");
        for (int l = 0; l < mn; ++l) {
          if (l == k || flows[l].empty()) continue;
          next.kernel(k, l) = div(add(flows[l]), denominator);
        }
      }
    }
    tree.levels_.push_back(std::move(next));
  }

  const int top = tree.top_rank();

  // E N(i, r) via the product of reciprocal rank exit rates along i's
  // nesting chain; the anchor at each rank is pi^s(i) itself.
  tree.visits_ = Grid<AsymptoticScalar>(m, std::max(top, 1));
  for (int i = 0; i < m; ++i) {
    AsymptoticScalar running = AsymptoticScalar::one();
    if (top >= 1) tree.visits_(i, 0) = running;
    for (int s = 1; s < top; ++s) {
      const RankLevel& level = tree.levels_[s - 1];
      int anchor = level.cluster_of_base[i];
      std::vector<int> indices;
      InvariantMeasure lambda;
      class_of_cluster(level, anchor, indices, lambda);
      AsymptoticScalar factor = exit_rate(indices, lambda, level.kernel, anchor);
      if (factor.is_zero()) throw std::logic_error("zero exit rate below the top rank");
      running = div(running, factor);
      tree.visits_(i, s) = running;
    }
  }

  // tau_k^{r,eps} = leading-order sum of tau_i * EN(i, r) over the cluster.
  for (int r = 1; r < top; ++r) {
    RankLevel& level = tree.levels_[r];
    level.tau.resize(level.clusters.size());
    for (size_t k = 0; k < level.clusters.size(); ++k) {
      std::vector<AsymptoticScalar> terms;
      for (int i : level.clusters[k].members)
        terms.push_back(mul(tree.spec_.tau[i], tree.visits_(i, r)));
      level.tau[k] = add(terms);
    }
  }

  return tree;
}

}  // namespace metastab
