// Command-line front end: validate specs, run the extended-space reduction,
// build cluster hierarchies, emit time-scale lattices and metastable reports,
// and run simulation / verification campaigns.
//
// Exit codes: 0 ok, 1 invalid spec, 2 commensurate-time refusal,
// 3 verification failure, 4 I/O error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "metastab/metastable.hpp"
#include "metastab/model.hpp"
#include "metastab/montecarlo.hpp"
#include "metastab/presets.hpp"
#include "metastab/report.hpp"
#include "metastab/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidSpec = 1;
constexpr int kExitCommensurate = 2;
constexpr int kExitVerification = 3;
constexpr int kExitIo = 4;

struct CliError {
  int code;
  std::string message;
};

metastab::LoadedSpec load_spec(const std::string& path) {
  try {
    return metastab::load_spec_file(path);
  } catch (const metastab::SpecIoError& e) {
    std::string what = e.what();
    if (what.find("cannot open") != std::string::npos) throw CliError{kExitIo, what};
    throw CliError{kExitInvalidSpec, what};
  } catch (const metastab::ParseError& e) {
    throw CliError{kExitInvalidSpec, e.what()};
  }
}

void print_diagnostics(const std::vector<metastab::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    std::cout << (d.severity == metastab::Diagnostic::Severity::Error ? "error" : "warning")
              << " [" << d.code << "] " << d.message << "\n";
}

// Validates in place; warnings let the command proceed, errors do not.
metastab::ReducedSpec prepare_reduced(metastab::LoadedSpec& loaded) {
  std::vector<metastab::Diagnostic> diagnostics;
  if (loaded.is_raw())
    diagnostics = metastab::validate(*loaded.raw);
  else
    diagnostics = metastab::validate(*loaded.reduced);
  if (metastab::has_errors(diagnostics)) {
    print_diagnostics(diagnostics);
    throw CliError{kExitInvalidSpec, "spec is invalid"};
  }
  return loaded.to_reduced();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw CliError{kExitIo, "cannot write '" + path + "'"};
  out << content;
  if (!out) throw CliError{kExitIo, "short write to '" + path + "'"};
}

int find_state(const metastab::ReducedSpec& spec, const std::string& label) {
  for (int i = 0; i < spec.size(); ++i)
    if (spec.states[i] == label) return i;
  std::string known;
  for (const auto& s : spec.states) known += " " + s;
  throw CliError{kExitInvalidSpec, "unknown state '" + label + "'; states are:" + known};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metastab: metastable analysis of parameter-dependent semi-Markov families"};
  app.require_subcommand(1);

  std::string spec_path, json_path, out_path, from_label, time_expr, dir = ".";
  double eps = 0.0;
  long long samples = 10000;
  uint64_t seed = 0;
  bool pairs = false;
  int workers = 0;
  std::vector<double> eps_list;

  auto* validate_cmd = app.add_subcommand("validate", "check a spec and print diagnostics");
  validate_cmd->add_option("spec", spec_path, "spec file")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "write the extended-space reduced spec");
  reduce_cmd->add_option("spec", spec_path, "spec file")->required();
  reduce_cmd->add_option("-o,--output", out_path, "output path (default stdout)");

  auto* analyze_cmd = app.add_subcommand("analyze", "build the cluster hierarchy and lattice");
  analyze_cmd->add_option("spec", spec_path, "spec file")->required();
  analyze_cmd->add_option("--json", json_path, "write the machine-readable document here");

  auto* metastable_cmd =
      app.add_subcommand("metastable", "metastable distributions per time-scale interval");
  metastable_cmd->add_option("spec", spec_path, "spec file")->required();
  metastable_cmd->add_option("--from", from_label, "initial state label")->required();
  metastable_cmd->add_option("--time", time_expr,
                             "scale expression; omit for the full interval report");
  metastable_cmd->add_flag("--pairs", pairs, "also present pair measures (raw-derived specs)");
  metastable_cmd->add_option("--json", json_path, "write the machine-readable document here");

  std::string exit_cluster, normalizer_expr;
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo at concrete eps");
  simulate_cmd->add_option("spec", spec_path, "spec file")->required();
  simulate_cmd->add_option("--eps", eps, "concrete parameter value")->required();
  simulate_cmd->add_option("--time", time_expr, "scale expression or plain number");
  simulate_cmd->add_option("--from", from_label, "initial state label")->required();
  simulate_cmd->add_option("--samples", samples, "number of paths");
  simulate_cmd->add_option("--seed", seed, "master seed");
  simulate_cmd->add_option("--workers", workers, "worker threads (0 = auto)");
  simulate_cmd->add_option("--exit-cluster", exit_cluster,
                           "comma-separated state labels: sample first-exit times instead of "
                           "the occupation at --time");
  simulate_cmd->add_option("--normalizer", normalizer_expr,
                           "scale expression dividing exit times before the Exp(1) KS statistic "
                           "(default: the sample mean)");
  simulate_cmd->add_option("--json", json_path, "write the machine-readable document here");

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance battery");
  verify_cmd->add_option("--eps-list", eps_list, "eps grid for the oracle-ratio criteria");
  verify_cmd->add_option("--seed", seed, "master seed");
  verify_cmd->add_option("--workers", workers, "worker threads (0 = auto)");
  verify_cmd->add_option("--json", json_path, "write the machine-readable document here");

  auto* presets_cmd = app.add_subcommand("presets", "write the bundled example specs");
  presets_cmd->add_option("--dir", dir, "target directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) {
      metastab::LoadedSpec loaded = load_spec(spec_path);
      std::vector<metastab::Diagnostic> diagnostics;
      if (loaded.is_raw())
        diagnostics = metastab::validate(*loaded.raw);
      else
        diagnostics = metastab::validate(*loaded.reduced);
      print_diagnostics(diagnostics);
      return diagnostics.empty() ? kExitOk : kExitInvalidSpec;
    }

    if (reduce_cmd->parsed()) {
      metastab::LoadedSpec loaded = load_spec(spec_path);
      metastab::ReducedSpec reduced = prepare_reduced(loaded);
      std::string document = metastab::spec_to_document(reduced);
      if (out_path.empty())
        std::cout << document;
      else
        write_file(out_path, document);
      return kExitOk;
    }

    if (analyze_cmd->parsed()) {
      metastab::LoadedSpec loaded = load_spec(spec_path);
      metastab::ReducedSpec reduced = prepare_reduced(loaded);
      metastab::ClusterTree tree = metastab::build_cluster_tree(reduced);
      metastab::TimeScaleLattice lattice = metastab::build_lattice(tree);
      std::cout << metastab::analyze_tables(tree, lattice);
      if (!json_path.empty()) write_file(json_path, metastab::analyze_document_json(tree, lattice));
      return kExitOk;
    }

    if (metastable_cmd->parsed()) {
      metastab::LoadedSpec loaded = load_spec(spec_path);
      metastab::ReducedSpec reduced = prepare_reduced(loaded);
      if (pairs && !reduced.has_pairs())
        throw CliError{kExitInvalidSpec, "--pairs needs a spec derived from a raw family"};
      metastab::ClusterTree tree = metastab::build_cluster_tree(reduced);
      metastab::TimeScaleLattice lattice = metastab::build_lattice(tree);
      int initial = find_state(reduced, from_label);

      std::vector<metastab::ReportEntry> entries;
      if (time_expr.empty()) {
        entries = metastab::full_report(tree, lattice, initial);
      } else {
        metastab::AsymptoticScalar t;
        try {
          t = metastab::parse_scale(reduced.basis, time_expr);
        } catch (const metastab::ParseError& e) {
          throw CliError{kExitInvalidSpec, e.what()};
        }
        metastab::TimeClassification location = metastab::classify_time(lattice, t);
        if (location.is_commensurate)
          throw CliError{kExitCommensurate,
                         "time scale is commensurate with the characteristic scale " +
                             metastab::to_string(reduced.basis, lattice.classes[location.index]) +
                             "; the metastable limit is only defined strictly between scales"};
        metastab::ReportEntry entry;
        entry.interval = location.index;
        entry.lower = location.index == 0 ? metastab::AsymptoticScalar::zero()
                                          : lattice.classes[location.index - 1];
        entry.upper_infinite =
            location.index == static_cast<int>(lattice.classes.size());
        if (!entry.upper_infinite) entry.upper = lattice.classes[location.index];
        entry.representative = t;
        entry.mu = metastab::metastable_distribution(tree, lattice, initial, t);
        entries.push_back(std::move(entry));
      }
      std::cout << metastab::metastable_tables(tree, lattice, initial, entries, pairs);
      if (!json_path.empty())
        write_file(json_path,
                   metastab::metastable_document_json(tree, lattice, initial, entries, pairs));
      return kExitOk;
    }

    if (simulate_cmd->parsed()) {
      metastab::LoadedSpec loaded = load_spec(spec_path);
      metastab::ReducedSpec reduced = prepare_reduced(loaded);
      int initial = find_state(reduced, from_label);
      metastab::ConcreteKernel kernel = metastab::instantiate(reduced, eps);

      if (!exit_cluster.empty()) {
        std::vector<int> cluster;
        std::stringstream labels(exit_cluster);
        std::string label;
        while (std::getline(labels, label, ',')) cluster.push_back(find_state(reduced, label));
        std::vector<double> exit_times =
            metastab::exit_time_samples(kernel, cluster, initial, samples, seed, workers);
        metastab::ExitSampleResult result;
        result.initial = initial;
        result.cluster = cluster;
        result.paths = samples;
        result.seed = seed;
        result.rng = std::string(metastab::Xoshiro256::kName) +
                     "; per-path stream = seed + golden*(path+1)";
        result.mean = 0.0;
        for (double s : exit_times) result.mean += s;
        result.mean /= static_cast<double>(exit_times.size());
        result.normalizer =
            normalizer_expr.empty()
                ? result.mean
                : metastab::evaluate(reduced.basis,
                                     metastab::parse_scale(reduced.basis, normalizer_expr), eps);
        result.ks_exp1 = metastab::ks_vs_exp1(exit_times, result.normalizer);
        std::cout << metastab::exit_table(kernel, result);
        if (!json_path.empty()) write_file(json_path, metastab::exit_document_json(kernel, result));
        return kExitOk;
      }

      if (time_expr.empty())
        throw CliError{kExitInvalidSpec, "--time is required unless --exit-cluster is given"};
      double t;
      try {
        t = metastab::evaluate(reduced.basis, metastab::parse_scale(reduced.basis, time_expr), eps);
      } catch (const metastab::ParseError&) {
        try {
          t = std::stod(time_expr);
        } catch (const std::exception&) {
          throw CliError{kExitInvalidSpec, "cannot read --time '" + time_expr + "'"};
        }
      }
      metastab::OccupationResult result =
          metastab::occupation_distribution(kernel, initial, t, samples, seed, workers);
      std::cout << metastab::simulate_table(kernel, result);
      if (!json_path.empty()) write_file(json_path, metastab::simulate_document_json(kernel, result));
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      metastab::VerifyOptions options;
      if (!eps_list.empty()) options.oracle_eps_grid = eps_list;
      options.seed = seed;
      options.workers = workers;
      std::vector<metastab::CriterionResult> results = metastab::run_acceptance_battery(options);
      std::cout << metastab::verify_table(results);
      if (!json_path.empty()) write_file(json_path, metastab::verify_document_json(results));
      return metastab::all_passed(results) ? kExitOk : kExitVerification;
    }

    if (presets_cmd->parsed()) {
      for (const auto& preset : metastab::preset_files()) {
        std::string path = dir + "/" + preset.filename;
        write_file(path, preset.document);
        std::cout << "wrote " << path << "\n";
      }
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const metastab::CommensurateTimeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCommensurate;
  } catch (const metastab::EvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidSpec;
  }
  return kExitOk;
}
