#include "metastab/report.hpp"

#include <cstdio>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

namespace metastab {

using nlohmann::json;

namespace {

json tool_footer() {
  return json{{"name", "metastab"}, {"version", "0.1.0"}};
}

std::string scale_text(const ClusterTree& tree, const AsymptoticScalar& scale) {
  return to_string(tree.spec().basis, scale);
}

std::string cluster_label(const ClusterTree& tree, int rank, int cluster) {
  const auto& members = tree.level(rank).clusters[cluster].members;
  std::string out = "{";
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) out += ",";
    out += tree.spec().states[members[i]];
  }
  return out + "}";
}

std::string mu_text(const ClusterTree& tree, const StateDistribution& mu) {
  std::string out;
  for (const auto& [state, mass] : mu) {
    if (!out.empty()) out += "  ";
    out += tree.spec().states[state] + "=" + rational_to_string(mass);
  }
  return out;
}

json mu_json(const ClusterTree& tree, const StateDistribution& mu) {
  json out = json::object();
  for (const auto& [state, mass] : mu) out[tree.spec().states[state]] = rational_to_string(mass);
  return out;
}

std::string interval_bound_lower(const ClusterTree& tree, const ReportEntry& entry) {
  return entry.lower.is_zero() ? "0" : scale_text(tree, entry.lower);
}

std::string interval_bound_upper(const ClusterTree& tree, const ReportEntry& entry) {
  return entry.upper_infinite ? "inf" : scale_text(tree, entry.upper);
}

// Pair presentation of a distribution over extended states.
json pairs_json(const ClusterTree& tree, const StateDistribution& mu) {
  const auto& origin = tree.spec().pair_origin;
  json rows = json::array();
  std::map<std::string, Rational> marginal;
  for (const auto& [state, mass] : mu) {
    const auto& [from, to] = origin[state];
    rows.push_back(json{{"current", from}, {"next", to}, {"p", rational_to_string(mass)}});
    marginal[from] += mass;
  }
  json marg = json::object();
  for (const auto& [label, mass] : marginal) marg[label] = rational_to_string(mass);
  return json{{"pair_measure", rows}, {"marginal_current", marg}};
}

std::string pairs_table(const ClusterTree& tree, const StateDistribution& mu) {
  const auto& origin = tree.spec().pair_origin;
  std::ostringstream out;
  std::map<std::string, Rational> marginal;
  out << "    pair measure (current, next):\n";
  for (const auto& [state, mass] : mu) {
    const auto& [from, to] = origin[state];
    out << "      (" << from << ", " << to << ") = " << rational_to_string(mass) << "\n";
    marginal[from] += mass;
  }
  out << "    marginal over current state:\n";
  for (const auto& [label, mass] : marginal)
    out << "      " << label << " = " << rational_to_string(mass) << "\n";
  return out.str();
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string analyze_document_json(const ClusterTree& tree, const TimeScaleLattice& lattice) {
  json doc;
  doc["tool"] = tool_footer();
  doc["states"] = tree.spec().states;

  json ranks = json::array();
  for (int r = 0; r <= tree.top_rank(); ++r) {
    const RankLevel& level = tree.level(r);
    json rank{{"rank", r}};
    json clusters = json::array();
    for (int k = 0; k < tree.cluster_count(r); ++k) {
      json cluster{{"id", k}, {"members", json::array()}};
      for (int b : level.clusters[k].members) cluster["members"].push_back(tree.spec().states[b]);
      if (r < tree.top_rank())
        cluster["tau"] = scale_text(tree, tree.finite_time_scale(r, k));
      else
        cluster["tau"] = "inf";
      clusters.push_back(cluster);
    }
    rank["clusters"] = clusters;
    if (!level.kernel.empty()) {
      json kernel = json::array(), limit = json::array();
      for (int i = 0; i < level.kernel.rows(); ++i) {
        json krow = json::array(), lrow = json::array();
        for (int j = 0; j < level.kernel.cols(); ++j) {
          krow.push_back(scale_text(tree, level.kernel(i, j)));
          lrow.push_back(rational_to_string(level.limit(i, j)));
        }
        kernel.push_back(krow);
        limit.push_back(lrow);
      }
      rank["kernel"] = kernel;
      rank["limit_kernel"] = limit;
      rank["closed_classes"] = level.decomposition.closed_classes;
      rank["transient"] = level.decomposition.transient;
      json lambdas = json::array();
      for (size_t c = 0; c < level.lambdas.size(); ++c) {
        json measure = json::array();
        for (const auto& weight : level.lambdas[c]) measure.push_back(rational_to_string(weight));
        lambdas.push_back(json{{"class", level.decomposition.closed_classes[c]},
                               {"measure", measure}});
      }
      rank["lambda"] = lambdas;
    }
    ranks.push_back(rank);
  }
  doc["ranks"] = ranks;

  json visits = json::array();
  for (int i = 0; i < tree.spec().size(); ++i) {
    json row{{"state", tree.spec().states[i]}, {"by_rank", json::array()}};
    for (int r = 0; r < tree.top_rank(); ++r)
      row["by_rank"].push_back(scale_text(tree, tree.visit_count(i, r)));
    visits.push_back(row);
  }
  doc["visit_counts"] = visits;

  json classes = json::array();
  for (size_t c = 0; c < lattice.classes.size(); ++c)
    classes.push_back(json{{"scale", scale_text(tree, lattice.classes[c])},
                           {"rank", lattice.representative_of[c].first},
                           {"cluster", lattice.representative_of[c].second}});
  doc["lattice"] = classes;
  return doc.dump(2) + "\n";
}

std::string analyze_tables(const ClusterTree& tree, const TimeScaleLattice& lattice) {
  std::ostringstream out;
  out << "hierarchy: " << tree.spec().size() << " states, top rank " << tree.top_rank() << "\n\n";
  for (int r = 0; r <= tree.top_rank(); ++r) {
    const RankLevel& level = tree.level(r);
    out << "rank " << r << " (" << tree.cluster_count(r) << " clusters)\n";
    for (int k = 0; k < tree.cluster_count(r); ++k) {
      out << "  cluster " << k << " " << cluster_label(tree, r, k) << "  tau = ";
      if (r < tree.top_rank())
        out << scale_text(tree, tree.finite_time_scale(r, k));
      else
        out << "inf";
      out << "\n";
    }
    if (!level.kernel.empty()) {
      out << "  kernel:\n";
      for (int i = 0; i < level.kernel.rows(); ++i) {
        out << "   ";
        for (int j = 0; j < level.kernel.cols(); ++j)
          out << " " << std::setw(14) << scale_text(tree, level.kernel(i, j));
        out << "\n";
      }
      out << "  limit kernel:\n";
      for (int i = 0; i < level.limit.rows(); ++i) {
        out << "   ";
        for (int j = 0; j < level.limit.cols(); ++j)
          out << " " << std::setw(14) << rational_to_string(level.limit(i, j));
        out << "\n";
      }
      out << "  closed classes:";
      for (const auto& cls : level.decomposition.closed_classes) {
        out << " {";
        for (size_t i = 0; i < cls.size(); ++i) out << (i ? "," : "") << cls[i];
        out << "}";
      }
      out << "  transient:";
      for (int t : level.decomposition.transient) out << " " << t;
      out << "\n";
      for (size_t c = 0; c < level.lambdas.size(); ++c) {
        out << "  lambda[" << c << "] =";
        for (const auto& weight : level.lambdas[c]) out << " " << rational_to_string(weight);
        out << "\n";
      }
    }
    out << "\n";
  }

  out << "visit counts EN(state, rank):\n";
  for (int i = 0; i < tree.spec().size(); ++i) {
    out << "  " << std::setw(8) << tree.spec().states[i] << ":";
    for (int r = 0; r < tree.top_rank(); ++r)
      out << " " << scale_text(tree, tree.visit_count(i, r));
    out << "\n";
  }

  out << "\ntime-scale lattice: 0";
  for (const auto& cls : lattice.classes) out << "  <<  " << scale_text(tree, cls);
  out << "  <<  inf\n";
  return out.str();
}

std::string metastable_document_json(const ClusterTree& tree, const TimeScaleLattice& lattice,
                                     int initial, const std::vector<ReportEntry>& entries,
                                     bool include_pairs) {
  (void)lattice;
  json doc;
  doc["tool"] = tool_footer();
  doc["initial"] = tree.spec().states[initial];
  json rows = json::array();
  for (const auto& entry : entries) {
    json row{{"interval", entry.interval},
             {"lower", interval_bound_lower(tree, entry)},
             {"upper", interval_bound_upper(tree, entry)},
             {"t", scale_text(tree, entry.representative)},
             {"mu", mu_json(tree, entry.mu)}};
    if (include_pairs && tree.spec().has_pairs()) row["pairs"] = pairs_json(tree, entry.mu);
    rows.push_back(row);
  }
  doc["entries"] = rows;
  return doc.dump(2) + "\n";
}

std::string metastable_tables(const ClusterTree& tree, const TimeScaleLattice& lattice,
                              int initial, const std::vector<ReportEntry>& entries,
                              bool include_pairs) {
  (void)lattice;
  std::ostringstream out;
  out << "metastable report for initial state " << tree.spec().states[initial] << "\n";
  for (const auto& entry : entries) {
    out << "  interval " << entry.interval << ": (" << interval_bound_lower(tree, entry) << ", "
        << interval_bound_upper(tree, entry) << ")  t = " << scale_text(tree, entry.representative)
        << "\n    mu: " << mu_text(tree, entry.mu) << "\n";
    if (include_pairs && tree.spec().has_pairs()) out << pairs_table(tree, entry.mu);
  }
  return out.str();
}

std::string simulate_document_json(const ConcreteKernel& kernel, const OccupationResult& result) {
  json doc;
  doc["tool"] = tool_footer();
  doc["eps"] = kernel.eps;
  doc["t"] = result.t;
  doc["samples"] = result.paths;
  doc["seed"] = result.seed;
  doc["rng"] = result.rng;
  doc["initial"] = kernel.states[result.initial];
  json rows = json::array();
  for (int s = 0; s < kernel.size(); ++s)
    rows.push_back(json{{"state", kernel.states[s]},
                        {"count", result.counts[s]},
                        {"frequency", result.frequency[s]},
                        {"wilson95", json::array({result.wilson95[s].first,
                                                  result.wilson95[s].second})}});
  doc["per_state"] = rows;
  return doc.dump(2) + "\n";
}

std::string exit_document_json(const ConcreteKernel& kernel, const ExitSampleResult& result) {
  json doc;
  doc["tool"] = tool_footer();
  doc["eps"] = kernel.eps;
  doc["samples"] = result.paths;
  doc["seed"] = result.seed;
  doc["rng"] = result.rng;
  doc["initial"] = kernel.states[result.initial];
  json cluster = json::array();
  for (int s : result.cluster) cluster.push_back(kernel.states[s]);
  doc["cluster"] = cluster;
  doc["mean_exit_time"] = result.mean;
  doc["normalizer"] = result.normalizer;
  doc["ks_vs_exp1"] = result.ks_exp1;
  return doc.dump(2) + "\n";
}

std::string exit_table(const ConcreteKernel& kernel, const ExitSampleResult& result) {
  std::ostringstream out;
  out << "exit times from {";
  for (size_t i = 0; i < result.cluster.size(); ++i)
    out << (i ? "," : "") << kernel.states[result.cluster[i]];
  out << "} (eps = " << format_double(kernel.eps) << ", N = " << result.paths
      << ", seed = " << result.seed << ", initial " << kernel.states[result.initial] << ")\n";
  out << "rng: " << result.rng << "\n";
  out << "mean exit time : " << format_double(result.mean) << "\n";
  out << "normalizer     : " << format_double(result.normalizer) << "\n";
  out << "KS vs Exp(1)   : " << format_double(result.ks_exp1) << "\n";
  return out.str();
}

std::string simulate_table(const ConcreteKernel& kernel, const OccupationResult& result) {
  std::ostringstream out;
  out << "occupation at t = " << format_double(result.t) << " (eps = " << format_double(kernel.eps)
      << ", N = " << result.paths << ", seed = " << result.seed << ", initial "
      << kernel.states[result.initial] << ")\n";
  out << "rng: " << result.rng << "\n";
  out << std::setw(10) << "state" << std::setw(12) << "count" << std::setw(22) << "frequency"
      << std::setw(22) << "wilson95.lo" << std::setw(22) << "wilson95.hi" << "\n";
  for (int s = 0; s < kernel.size(); ++s)
    out << std::setw(10) << kernel.states[s] << std::setw(12) << result.counts[s] << std::setw(22)
        << format_double(result.frequency[s]) << std::setw(22)
        << format_double(result.wilson95[s].first) << std::setw(22)
        << format_double(result.wilson95[s].second) << "\n";
  return out.str();
}

}  // namespace metastab
