#include "metastab/presets.hpp"

namespace metastab {

namespace {

ReducedSpec two_well(const std::vector<std::string>& leak_scales) {
  ReducedSpec spec;
  spec.states = {"1", "2", "3", "4"};
  spec.P = Grid<AsymptoticScalar>(4, 4);
  spec.tau.assign(4, AsymptoticScalar::one());
  spec.sojourn.assign(4, SojournFamily{});
  auto scale = [&](const std::string& text) { return parse_scale(spec.basis, text); };
  spec.P(0, 1) = scale("1");
  spec.P(0, 2) = scale(leak_scales[0]);
  spec.P(1, 0) = scale("1");
  spec.P(1, 3) = scale(leak_scales[1]);
  spec.P(2, 3) = scale("1");
  spec.P(2, 0) = scale(leak_scales[2]);
  spec.P(3, 2) = scale("1");
  spec.P(3, 1) = scale(leak_scales[3]);
  return spec;
}

}  // namespace

ReducedSpec preset_two_well_polynomial() {
  return two_well({"eps", "eps^2", "eps^2", "eps^3"});
}

ReducedSpec preset_two_well_exponential() {
  return two_well({"exp_inv_eps_sq^-1", "exp_inv_eps_sq^-2", "exp_inv_eps_sq^-2",
                   "exp_inv_eps_sq^-3"});
}

RawSpec preset_heteroclinic_log() {
  RawSpec spec;
  spec.states = {"A", "B", "C"};
  spec.P = Grid<AsymptoticScalar>(3, 3);
  spec.T = Grid<AsymptoticScalar>(3, 3);
  spec.sojourn = Grid<SojournFamily>(3, 3);
  auto scale = [&](const std::string& text) { return parse_scale(spec.basis, text); };
  spec.P(0, 1) = scale("1");
  spec.T(0, 1) = scale("log_inv_eps");
  spec.P(0, 2) = scale("eps");
  spec.T(0, 2) = scale("2*log_inv_eps*inv_eps");
  spec.P(1, 0) = scale("1/2");
  spec.T(1, 0) = scale("log_inv_eps");
  spec.P(1, 2) = scale("1/2");
  spec.T(1, 2) = scale("3*log_inv_eps");
  spec.P(2, 0) = scale("1");
  spec.T(2, 0) = scale("log_inv_eps*inv_eps^2");
  return spec;
}

ReducedSpec two_state_renewal() {
  ReducedSpec spec;
  spec.states = {"slow", "fast"};
  spec.P = Grid<AsymptoticScalar>(2, 2);
  spec.P(0, 1) = AsymptoticScalar::one();
  spec.P(1, 0) = AsymptoticScalar::one();
  spec.tau = {parse_scale(spec.basis, "1"), parse_scale(spec.basis, "eps")};
  spec.sojourn.assign(2, SojournFamily{});
  return spec;
}

std::vector<PresetFile> preset_files() {
  return {
      {"twowell_polynomial.spec.json", spec_to_document(preset_two_well_polynomial())},
      {"twowell_exponential.spec.json", spec_to_document(preset_two_well_exponential())},
      {"heteroclinic_log.spec.json", spec_to_document(preset_heteroclinic_log())},
  };
}

}  // namespace metastab
