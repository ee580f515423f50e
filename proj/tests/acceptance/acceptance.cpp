// Acceptance suite: runs every criterion of the verification battery at its
// pinned tolerance and budget, printing one pass/fail line per criterion.
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "metastab/verify.hpp"

namespace {

// Wall-clock budgets per criterion, seconds.
const std::map<std::string, double> kBudgets = {
    {"1-ergodic-exactness", 1.0},   {"2-two-state-renewal", 10.0},
    {"3-visit-count-oracle", 1.0},  {"4-mean-exit-oracle", 1.0},
    {"5-exponential-exit-law", 60.0}, {"6-hitting-oracle", 1.0},
    {"7-pipeline-occupancy", 300.0}, {"8-structural-fuzz", 120.0},
    {"9-reduction-correctness", 10.0},
};

}  // namespace

int main() {
  metastab::VerifyOptions options;  // spec defaults: eps grid {1e-1,1e-2,1e-3}, seed 0
  std::vector<metastab::CriterionResult> results = metastab::run_acceptance_battery(options);

  bool all_ok = true;
  for (const auto& result : results) {
    bool in_budget = true;
    auto budget = kBudgets.find(result.name);
    if (budget != kBudgets.end() && result.seconds > budget->second) in_budget = false;
    bool ok = result.passed && in_budget;
    all_ok = all_ok && ok;
    std::printf("[%s] %s: %s [%.2f s%s]\n", ok ? "PASS" : "FAIL", result.name.c_str(),
                result.detail.c_str(), result.seconds,
                in_budget ? "" : ", over budget");
  }
  std::printf("%s\n", all_ok ? "acceptance: all criteria passed"
                             : "acceptance: criteria FAILED");
  return all_ok ? 0 : 1;
}
