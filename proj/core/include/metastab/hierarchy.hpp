#ifndef METASTAB_HIERARCHY_HPP
#define METASTAB_HIERARCHY_HPP

#include <map>
#include <vector>

#include "metastab/chain.hpp"
#include "metastab/model.hpp"

namespace metastab {

struct Cluster {
  std::vector<int> members;  // base-state indices, sorted
};

// Everything known about one rank of the hierarchy. The top rank carries only
// the cluster list (its time scale is the distinguished infinity and there is
// no kernel to analyze).
struct RankLevel {
  std::vector<Cluster> clusters;
  std::vector<int> cluster_of_base;       // pi^r: base state -> cluster index
  Grid<AsymptoticScalar> kernel;          // P^{r,eps}; empty at the top rank
  LimitMatrix limit;                      // P^{r,0}; empty at the top rank
  ErgodicDecomposition decomposition;     // of `limit`
  std::vector<InvariantMeasure> lambdas;  // aligned with decomposition.closed_classes
  std::vector<int> parent;                // cluster -> cluster at rank r+1
  std::vector<AsymptoticScalar> tau;      // tau_k^{r,eps} per cluster; empty at the top
};

// The full cluster hierarchy of a reduced spec: ranks 0..R, rank kernels,
// invariant measures, per-state expected visit counts, and cluster time
// scales. Rank-0 clusters are singletons; each next rank merges the closed
// classes of the current limit kernel; rank R has a single cluster whose time
// scale is infinite.
class ClusterTree {
 public:
  const ReducedSpec& spec() const { return spec_; }
  int top_rank() const { return static_cast<int>(levels_.size()) - 1; }
  const RankLevel& level(int rank) const { return levels_[rank]; }
  int cluster_count(int rank) const { return static_cast<int>(levels_[rank].clusters.size()); }

  // pi^r(i) as a cluster index.
  int cluster_of(int base_state, int rank) const { return levels_[rank].cluster_of_base[base_state]; }

  // E N(i, r): expected visits to base state i before exiting pi^r(i),
  // to leading order. Requires 0 <= r < R; EN(i, 0) = 1.
  const AsymptoticScalar& visit_count(int base_state, int rank) const;

  // tau_k^{r,eps}. Returns false (infinite) at the top rank.
  bool time_scale(int rank, int cluster, AsymptoticScalar& out) const;
  // Finite-rank accessor; throws at the top rank.
  const AsymptoticScalar& finite_time_scale(int rank, int cluster) const;

  // Limit distribution over the base states of target cluster l reached when
  // rank-r cluster k is first exited into l: each base exit edge (a -> j) is
  // weighted by the within-cluster visit count EN(a, r). Non-negative
  // rationals summing to exactly 1. Requires a nonzero P^{r,eps}(k, l).
  std::map<int, Rational> entry_weights(int rank, int source_cluster, int target_cluster) const;

  friend ClusterTree build_cluster_tree(const ReducedSpec& spec);

 private:
  ReducedSpec spec_;
  std::vector<RankLevel> levels_;
  Grid<AsymptoticScalar> visits_;  // M x R
};

// Iterates limit kernel -> ergodic decomposition -> invariant measures ->
// kernel recursion until a single cluster remains. The spec must be valid.
ClusterTree build_cluster_tree(const ReducedSpec& spec);

}  // namespace metastab

#endif
