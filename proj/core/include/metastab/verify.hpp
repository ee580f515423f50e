#ifndef METASTAB_VERIFY_HPP
#define METASTAB_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace metastab {

struct CriterionResult {
  std::string name;
  bool passed;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  // eps grid for the oracle-ratio criteria (visit counts, mean exit times).
  std::vector<double> oracle_eps_grid{1e-1, 1e-2, 1e-3};
  uint64_t seed = 0;
  int workers = 0;  // 0 = pick from hardware
};

// The acceptance battery: asymptotic predictions against exact linear-algebra
// oracles and Monte Carlo at concrete eps, plus the structural fuzz and
// reduction-correctness suites. Every tolerance is fixed here.
std::vector<CriterionResult> run_acceptance_battery(const VerifyOptions& options);

bool all_passed(const std::vector<CriterionResult>& results);

std::string verify_table(const std::vector<CriterionResult>& results);
std::string verify_document_json(const std::vector<CriterionResult>& results);

}  // namespace metastab

#endif
