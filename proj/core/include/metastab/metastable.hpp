#ifndef METASTAB_METASTABLE_HPP
#define METASTAB_METASTABLE_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metastab/hierarchy.hpp"

namespace metastab {

// Totally ordered commensurability classes of the tree's finite time scales,
// with implicit ZeroScale below and Infinity above. The representative of a
// class is the tau of the lexicographically smallest (rank, cluster) in it.
struct TimeScaleLattice {
  std::vector<AsymptoticScalar> classes;               // strictly increasing
  std::vector<std::pair<int, int>> representative_of;  // (rank, cluster) per class

  int interval_count() const { return static_cast<int>(classes.size()) + 1; }
};

TimeScaleLattice build_lattice(const ClusterTree& tree);

// Location of a time scale in the lattice: strictly inside interval k, which
// spans (classes[k-1], classes[k]) with the endpoints 0 and infinity, or
// commensurate with class `index`.
struct TimeClassification {
  bool is_commensurate;
  int index;  // interval index, or class index when commensurate
};

TimeClassification classify_time(const TimeScaleLattice& lattice, const AsymptoticScalar& t);

// Raised when a queried time scale is commensurate with a lattice class: the
// metastable limit is only claimed strictly between scales, so the query is
// refused rather than answered.
class CommensurateTimeError : public std::runtime_error {
 public:
  CommensurateTimeError(std::string scale_text)
      : std::runtime_error("time scale commensurate with the characteristic scale " + scale_text),
        scale_text(std::move(scale_text)) {}
  std::string scale_text;
};

// Probability over base states with exact rational masses summing to 1.
using StateDistribution = std::map<int, Rational>;

// Limit occupation inside a cluster at scales that mix it without leaving:
// descend to the largest rank where the cluster splits, weight subclusters by
// lambda * (tau ratio limits), and recurse.
StateDistribution internal_equilibrium(const ClusterTree& tree, int rank, int cluster);

// The metastable distribution for initial base state `i` at a time scale
// lying strictly inside a lattice interval.
StateDistribution metastable_distribution(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                          int initial, const AsymptoticScalar& t);

struct ReportEntry {
  int interval;               // index into the lattice tiling of (0, inf)
  AsymptoticScalar lower;     // Zero scale for the first interval
  bool upper_infinite;
  AsymptoticScalar upper;     // meaningful when !upper_infinite
  AsymptoticScalar representative;
  StateDistribution mu;
};

// One entry per lattice interval; entries with equal mu are kept separate
// (the lattice may be finer than the points where mu changes).
std::vector<ReportEntry> full_report(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                     int initial);

// Deterministic in-interval representative: mean exponent map between finite
// neighbors, lowest class times eps for the first interval, largest class
// times inv_eps for the last.
AsymptoticScalar interval_representative(const TimeScaleLattice& lattice, int interval,
                                         const ScaleBasis& basis);

}  // namespace metastab

#endif
