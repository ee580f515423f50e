#ifndef METASTAB_PRESETS_HPP
#define METASTAB_PRESETS_HPP

#include <string>
#include <vector>

#include "metastab/model.hpp"

namespace metastab {

// Bundled example families.
//
// Two wells {1,2} and {3,4} with in-well limit 2-cycles and rare leaks; all
// unit mean transition times. The polynomial variant leaks at eps, eps^2,
// eps^2, eps^3; the exponential variant uses e^{-V/eps^2} leak probabilities
// (numerically untestable at small eps, kept for symbolic analysis).
ReducedSpec preset_two_well_polynomial();
ReducedSpec preset_two_well_exponential();

// Three-state raw family with log-corrected transition times
// V * ln(1/eps) * eps^-gamma, exercising the extended-space reduction.
RawSpec preset_heteroclinic_log();

// Two alternating states with mean times 1 and eps; the renewal-theory
// test fixture.
ReducedSpec two_state_renewal();

struct PresetFile {
  std::string filename;
  std::string document;
};

std::vector<PresetFile> preset_files();

}  // namespace metastab

#endif
