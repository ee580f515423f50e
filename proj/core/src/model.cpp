#include "metastab/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "internal/scc.hpp"
#include "json.hpp"

namespace metastab {

using nlohmann::json;

double SojournFamily::squared_cv() const {
  switch (kind) {
    case SojournKind::Exponential:
      return 1.0;
    case SojournKind::Gamma:
      return 1.0 / gamma_shape.get_d();
    case SojournKind::LogNormal:
      return std::exp(lognormal_sigma * lognormal_sigma) - 1.0;
  }
  return 1.0;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Diagnostic::Severity::Error) return true;
  return false;
}

namespace {

void check_family(const SojournFamily& family, int state, std::vector<Diagnostic>& out) {
  if (family.kind == SojournKind::Gamma && family.gamma_shape <= 0)
    out.push_back({Diagnostic::Severity::Error, "bad-sojourn",
                   "gamma shape must be positive at state " + std::to_string(state + 1),
                   {state}});
  if (family.kind == SojournKind::LogNormal && !(family.lognormal_sigma > 0))
    out.push_back({Diagnostic::Severity::Error, "bad-sojourn",
                   "lognormal sigma must be positive at state " + std::to_string(state + 1),
                   {state}});
}

// Shared validation core. `time_defined(i, j)` answers whether the transition
// time for a nonzero edge is available.
template <class TimeDefined>
std::vector<Diagnostic> validate_kernel(Grid<AsymptoticScalar>& P,
                                        const std::vector<std::string>& labels,
                                        TimeDefined time_defined) {
  std::vector<Diagnostic> out;
  const int m = P.rows();
  if (m < 2) {
    out.push_back({Diagnostic::Severity::Error, "too-few-states",
                   "a spec needs at least two states", {}});
    return out;
  }

  for (int i = 0; i < m; ++i) {
    if (!P(i, i).is_zero())
      out.push_back({Diagnostic::Severity::Error, "nonzero-diagonal",
                     "nonzero diagonal at state " + labels[i], {i}});
  }

  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && !P(i, j).is_zero() && !time_defined(i, j))
        out.push_back({Diagnostic::Severity::Error, "missing-time",
                       "transition time undefined on edge " + labels[i] + " -> " + labels[j],
                       {i, j}});

  for (int i = 0; i < m; ++i) {
    std::vector<AsymptoticScalar> row;
    for (int j = 0; j < m; ++j)
      if (j != i) row.push_back(P(i, j));
    AsymptoticScalar leading = add(row);
    if (leading.is_zero()) {
      out.push_back({Diagnostic::Severity::Error, "empty-row",
                     "state " + labels[i] + " has no outgoing transitions", {i}});
      continue;
    }
    if (leading != AsymptoticScalar::one()) {
      for (int j = 0; j < m; ++j)
        if (!P(i, j).is_zero()) P(i, j) = div(P(i, j), leading);
      out.push_back({Diagnostic::Severity::Warning, "row-normalized",
                     "row of state " + labels[i] + " divided by its leading sum", {i}});
    }
  }

  std::vector<std::vector<int>> adjacency(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (!P(i, j).is_zero()) adjacency[i].push_back(j);
  std::vector<int> component;
  if (internal::strongly_connected_components(adjacency, component) != 1)
    out.push_back({Diagnostic::Severity::Error, "not-strongly-connected",
                   "the positive-entry digraph is not strongly connected", {}});

  return out;
}

}  // namespace

std::vector<Diagnostic> validate(RawSpec& spec) {
  auto out = validate_kernel(spec.P, spec.states,
                             [&](int i, int j) { return !spec.T(i, j).is_zero(); });
  for (int i = 0; i < spec.size(); ++i)
    for (int j = 0; j < spec.size(); ++j)
      if (!spec.P(i, j).is_zero()) check_family(spec.sojourn(i, j), i, out);
  return out;
}

std::vector<Diagnostic> validate(ReducedSpec& spec) {
  auto out = validate_kernel(spec.P, spec.states,
                             [&](int i, int) { return !spec.tau[i].is_zero(); });
  for (int i = 0; i < spec.size(); ++i) check_family(spec.sojourn[i], i, out);
  return out;
}

ReducedSpec reduce_to_extended(const RawSpec& spec) {
  RawSpec checked = spec;
  auto diagnostics = validate(checked);
  if (has_errors(diagnostics))
    throw std::invalid_argument("reduce_to_extended on an invalid spec: " +
                                diagnostics.front().message);
  const int m = checked.size();

  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (!checked.P(a, b).is_zero()) pairs.emplace_back(a, b);
  const int mbar = static_cast<int>(pairs.size());

  ReducedSpec reduced;
  reduced.basis = checked.basis;
  reduced.P = Grid<AsymptoticScalar>(mbar, mbar);
  reduced.tau.resize(mbar);
  reduced.sojourn.resize(mbar);
  reduced.pair_origin.resize(mbar);
  for (int s = 0; s < mbar; ++s) {
    auto [a, b] = pairs[s];
    reduced.states.push_back(checked.states[a] + "->" + checked.states[b]);
    reduced.tau[s] = checked.T(a, b);
    reduced.sojourn[s] = checked.sojourn(a, b);
    reduced.pair_origin[s] = {checked.states[a], checked.states[b]};
  }
  for (int s = 0; s < mbar; ++s) {
    int b = pairs[s].second;
    for (int t = 0; t < mbar; ++t) {
      auto [c, d] = pairs[t];
      if (b == c) reduced.P(s, t) = checked.P(c, d);
    }
  }
  return reduced;
}

ReducedSpec reduce_to_extended(const ReducedSpec& spec) { return spec; }

// --- documents -------------------------------------------------------------

namespace {

SojournFamily sojourn_from_json(const json& node) {
  SojournFamily family;
  std::string name = node.at("family").get<std::string>();
  // params live in a nested object; flattened fields are accepted too
  const json& params = node.contains("params") ? node.at("params") : node;
  if (name == "exponential") {
    family.kind = SojournKind::Exponential;
  } else if (name == "gamma") {
    family.kind = SojournKind::Gamma;
    family.gamma_shape = rational_from_string(params.at("shape").get<std::string>());
  } else if (name == "lognormal") {
    family.kind = SojournKind::LogNormal;
    family.lognormal_sigma = params.at("sigma").get<double>();
  } else {
    throw SpecIoError("unknown sojourn family '" + name + "'");
  }
  return family;
}

json sojourn_to_json(const SojournFamily& family) {
  switch (family.kind) {
    case SojournKind::Exponential:
      return json{{"family", "exponential"}};
    case SojournKind::Gamma:
      return json{{"family", "gamma"},
                  {"params", json{{"shape", rational_to_string(family.gamma_shape)}}}};
    case SojournKind::LogNormal:
      return json{{"family", "lognormal"},
                  {"params", json{{"sigma", family.lognormal_sigma}}}};
  }
  return json{{"family", "exponential"}};
}

ScaleBasis basis_from_json(const json& doc) {
  if (!doc.contains("basis")) return ScaleBasis::standard();
  std::vector<ScaleGenerator> generators;
  for (const auto& node : doc.at("basis")) {
    ScaleGenerator g;
    g.name = node.at("name").get<std::string>();
    std::string kind = node.at("kind").get<std::string>();
    if (kind == "exp_pow") {
      g.kind = GrowthKind::ExpPow;
      g.scale = rational_from_string(node.at("scale").get<std::string>());
      g.power = rational_from_string(node.at("power").get<std::string>());
    } else if (kind == "pow") {
      g.kind = GrowthKind::Pow;
      g.power = rational_from_string(node.at("power").get<std::string>());
    } else if (kind == "log") {
      g.kind = GrowthKind::Log;
    } else {
      throw SpecIoError("unknown generator kind '" + kind + "'");
    }
    generators.push_back(std::move(g));
  }
  return ScaleBasis(std::move(generators));
}

json basis_to_json(const ScaleBasis& basis) {
  json out = json::array();
  for (int i = 0; i < basis.size(); ++i) {
    const ScaleGenerator& g = basis.generator(i);
    json node{{"name", g.name}};
    switch (g.kind) {
      case GrowthKind::ExpPow:
        node["kind"] = "exp_pow";
        node["scale"] = rational_to_string(g.scale);
        node["power"] = rational_to_string(g.power);
        break;
      case GrowthKind::Pow:
        node["kind"] = "pow";
        node["power"] = rational_to_string(g.power);
        break;
      case GrowthKind::Log:
        node["kind"] = "log";
        break;
    }
    out.push_back(node);
  }
  return out;
}

int state_index(const std::vector<std::string>& states, const std::string& label) {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == label) return static_cast<int>(i);
  throw SpecIoError("unknown state label '" + label + "'");
}

}  // namespace

LoadedSpec parse_spec_document(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecIoError(std::string("spec document is not valid JSON: ") + e.what());
  }

  std::string mode = doc.value("mode", "raw");
  ScaleBasis basis = basis_from_json(doc);
  std::vector<std::string> states;
  for (const auto& s : doc.at("states")) states.push_back(s.get<std::string>());
  const int m = static_cast<int>(states.size());

  LoadedSpec loaded;
  if (mode == "raw") {
    RawSpec spec;
    spec.basis = basis;
    spec.states = states;
    spec.P = Grid<AsymptoticScalar>(m, m);
    spec.T = Grid<AsymptoticScalar>(m, m);
    spec.sojourn = Grid<SojournFamily>(m, m);
    for (const auto& edge : doc.at("transitions")) {
      int from = state_index(states, edge.at("from").get<std::string>());
      int to = state_index(states, edge.at("to").get<std::string>());
      spec.P(from, to) = parse_scale(basis, edge.at("p").get<std::string>());
      spec.T(from, to) = parse_scale(basis, edge.at("tau").get<std::string>());
      if (edge.contains("sojourn")) spec.sojourn(from, to) = sojourn_from_json(edge.at("sojourn"));
    }
    loaded.raw = std::move(spec);
  } else if (mode == "reduced") {
    ReducedSpec spec;
    spec.basis = basis;
    spec.states = states;
    spec.P = Grid<AsymptoticScalar>(m, m);
    spec.tau.assign(m, AsymptoticScalar::zero());
    spec.sojourn.assign(m, SojournFamily{});
    std::vector<bool> seen(m, false);
    for (const auto& edge : doc.at("transitions")) {
      int from = state_index(states, edge.at("from").get<std::string>());
      int to = state_index(states, edge.at("to").get<std::string>());
      spec.P(from, to) = parse_scale(basis, edge.at("p").get<std::string>());
      AsymptoticScalar tau = parse_scale(basis, edge.at("tau").get<std::string>());
      SojournFamily family;
      if (edge.contains("sojourn")) family = sojourn_from_json(edge.at("sojourn"));
      if (!seen[from]) {
        seen[from] = true;
        spec.tau[from] = tau;
        spec.sojourn[from] = family;
      } else if (spec.tau[from] != tau || !(spec.sojourn[from] == family)) {
        throw SpecIoError("reduced-mode transitions out of state '" + states[from] +
                          "' disagree on tau or sojourn");
      }
    }
    if (doc.contains("pairs")) {
      for (const auto& p : doc.at("pairs"))
        spec.pair_origin.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
      if (static_cast<int>(spec.pair_origin.size()) != m)
        throw SpecIoError("pairs field length does not match the state count");
    }
    loaded.reduced = std::move(spec);
  } else {
    throw SpecIoError("unknown mode '" + mode + "'");
  }
  return loaded;
}

LoadedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecIoError("cannot open spec file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_spec_document(buffer.str());
}

ReducedSpec LoadedSpec::to_reduced() const {
  if (raw.has_value()) return reduce_to_extended(*raw);
  return *reduced;
}

std::string spec_to_document(const RawSpec& spec) {
  json doc;
  doc["mode"] = "raw";
  doc["basis"] = basis_to_json(spec.basis);
  doc["states"] = spec.states;
  json edges = json::array();
  for (int i = 0; i < spec.size(); ++i)
    for (int j = 0; j < spec.size(); ++j)
      if (!spec.P(i, j).is_zero()) {
        json edge{{"from", spec.states[i]},
                  {"to", spec.states[j]},
                  {"p", to_string(spec.basis, spec.P(i, j))},
                  {"tau", to_string(spec.basis, spec.T(i, j))},
                  {"sojourn", sojourn_to_json(spec.sojourn(i, j))}};
        edges.push_back(edge);
      }
  doc["transitions"] = edges;
  return doc.dump(2) + "\n";
}

std::string spec_to_document(const ReducedSpec& spec) {
  json doc;
  doc["mode"] = "reduced";
  doc["basis"] = basis_to_json(spec.basis);
  doc["states"] = spec.states;
  json edges = json::array();
  for (int i = 0; i < spec.size(); ++i)
    for (int j = 0; j < spec.size(); ++j)
      if (!spec.P(i, j).is_zero()) {
        json edge{{"from", spec.states[i]},
                  {"to", spec.states[j]},
                  {"p", to_string(spec.basis, spec.P(i, j))},
                  {"tau", to_string(spec.basis, spec.tau[i])},
                  {"sojourn", sojourn_to_json(spec.sojourn[i])}};
        edges.push_back(edge);
      }
  doc["transitions"] = edges;
  if (spec.has_pairs()) {
    json pairs = json::array();
    for (const auto& [from, to] : spec.pair_origin) pairs.push_back(json::array({from, to}));
    doc["pairs"] = pairs;
  }
  return doc.dump(2) + "\n";
}

}  // namespace metastab
