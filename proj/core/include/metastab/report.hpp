#ifndef METASTAB_REPORT_HPP
#define METASTAB_REPORT_HPP

#include <string>

#include "metastab/metastable.hpp"
#include "metastab/montecarlo.hpp"

namespace metastab {

// Doubles print with full round-trip precision in both the machine and the
// human form, so the two outputs carry identical numbers.
std::string format_double(double value);

std::string analyze_document_json(const ClusterTree& tree, const TimeScaleLattice& lattice);
std::string analyze_tables(const ClusterTree& tree, const TimeScaleLattice& lattice);

std::string metastable_document_json(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                     int initial, const std::vector<ReportEntry>& entries,
                                     bool include_pairs);
std::string metastable_tables(const ClusterTree& tree, const TimeScaleLattice& lattice,
                              int initial, const std::vector<ReportEntry>& entries,
                              bool include_pairs);

std::string simulate_document_json(const ConcreteKernel& kernel, const OccupationResult& result);
std::string simulate_table(const ConcreteKernel& kernel, const OccupationResult& result);

// Exit-time sampling summary: first-exit times from a cluster, their mean,
// and the KS statistic of samples/normalizer against Exp(1).
struct ExitSampleResult {
  int initial;
  std::vector<int> cluster;
  long long paths;
  uint64_t seed;
  std::string rng;
  double mean;
  double normalizer;
  double ks_exp1;
};

std::string exit_document_json(const ConcreteKernel& kernel, const ExitSampleResult& result);
std::string exit_table(const ConcreteKernel& kernel, const ExitSampleResult& result);

}  // namespace metastab

#endif
