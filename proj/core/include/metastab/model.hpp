#ifndef METASTAB_MODEL_HPP
#define METASTAB_MODEL_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "metastab/asymptotics.hpp"
#include "metastab/grid.hpp"

namespace metastab {

// Mean-parameterized atomless sojourn laws. The mean is supplied at
// instantiation time; the family fixes the shape.
enum class SojournKind { Exponential, Gamma, LogNormal };

struct SojournFamily {
  SojournKind kind = SojournKind::Exponential;
  Rational gamma_shape = 1;  // Gamma only, > 0
  double lognormal_sigma = 1.0;  // LogNormal only, > 0

  // Var/mean^2, a per-family constant.
  double squared_cv() const;
  // Compares only the parameters the kind actually uses.
  bool operator==(const SojournFamily& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
      case SojournKind::Exponential:
        return true;
      case SojournKind::Gamma:
        return gamma_shape == other.gamma_shape;
      case SojournKind::LogNormal:
        return lognormal_sigma == other.lognormal_sigma;
    }
    return false;
  }
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity;
  std::string code;     // stable identifier, e.g. "nonzero-diagonal"
  std::string message;  // human text with state labels
  std::vector<int> states;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics);

// A parameter-dependent semi-Markov family with per-edge transition times.
struct RawSpec {
  ScaleBasis basis = ScaleBasis::standard();
  std::vector<std::string> states;
  Grid<AsymptoticScalar> P;            // M x M, Zero diagonal
  Grid<AsymptoticScalar> T;            // defined (nonzero) wherever P is nonzero
  Grid<SojournFamily> sojourn;         // per edge

  int size() const { return static_cast<int>(states.size()); }
};

// Same family after the extended-space reduction: one time scale per state.
struct ReducedSpec {
  ScaleBasis basis = ScaleBasis::standard();
  std::vector<std::string> states;
  Grid<AsymptoticScalar> P;
  std::vector<AsymptoticScalar> tau;   // per state
  std::vector<SojournFamily> sojourn;  // per state
  // (from, to) original class labels when the state is a pair, for the
  // pair-measure presentation. Empty when the spec was authored reduced.
  std::vector<std::pair<std::string, std::string>> pair_origin;

  int size() const { return static_cast<int>(states.size()); }
  bool has_pairs() const { return !pair_origin.empty(); }
};

// Structural checks: Zero diagonal, times defined where transitions exist,
// leading row sums equal to 1, strong connectivity of the positive-entry
// digraph. The only mutation is the documented row normalization (each row is
// divided by its leading sum, reported as a warning).
std::vector<Diagnostic> validate(RawSpec& spec);
std::vector<Diagnostic> validate(ReducedSpec& spec);

// State space of all pairs (a,b) with P_ab nonzero; transition
// (a,b) -> (c,d) has probability P_cd when b == c; the pair (a,b) inherits
// the (a,b) transition time and sojourn family.
ReducedSpec reduce_to_extended(const RawSpec& spec);
// Identity adapter: a spec whose times already depend only on the source
// passes through unchanged.
ReducedSpec reduce_to_extended(const ReducedSpec& spec);

// --- spec documents -------------------------------------------------------
//
// JSON with fields: mode ("raw" | "reduced"), optional basis (generator
// records {name, kind, scale, power}), states (labels), transitions (records
// {from, to, p, tau, sojourn}). Scale expressions use the monomial grammar.
// Reduced mode requires all transitions out of one state to carry the same
// tau and sojourn family.

class SpecIoError : public std::runtime_error {
 public:
  explicit SpecIoError(const std::string& what) : std::runtime_error(what) {}
};

// Either kind of spec, as loaded from a document.
struct LoadedSpec {
  std::optional<RawSpec> raw;
  std::optional<ReducedSpec> reduced;

  bool is_raw() const { return raw.has_value(); }
  // Reduces raw specs; passes reduced specs through.
  ReducedSpec to_reduced() const;
};

LoadedSpec parse_spec_document(const std::string& json_text);
LoadedSpec load_spec_file(const std::string& path);

std::string spec_to_document(const RawSpec& spec);
std::string spec_to_document(const ReducedSpec& spec);

}  // namespace metastab

#endif
