#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "probemin/model.hpp"

namespace probemin {

// Verification suites: each drives one guarantee of the solvers against the
// exact oracles at desk scale. The acceptance tests run these same suites at
// their pinned sizes.

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

struct VerifyOptions {
  std::uint64_t seed = 20240811;
  int instances = 0;  // 0 = suite default
  long long gap_n = 10;
  int jobs = 1;
};

std::vector<std::string> suite_names();
SuiteResult run_suite(const std::string& name, const VerifyOptions& options);

// Individual suites (sizes pinned by the acceptance criteria when the
// instance count is left at 0).
SuiteResult verify_gap_example(const VerifyOptions&);
SuiteResult verify_no_gap(const VerifyOptions&);             // + density greedy dominance
SuiteResult verify_extgreedy_dominance(const VerifyOptions&);
SuiteResult verify_bin_value(const VerifyOptions&);          // value + cost inequalities
SuiteResult verify_cost_bounds(const VerifyOptions&);
SuiteResult verify_nesting(const VerifyOptions&);
SuiteResult verify_mgreedy_opt(const VerifyOptions&);
SuiteResult verify_adapmgreedy_opt(const VerifyOptions&);
SuiteResult verify_metamin_4x(const VerifyOptions&);
SuiteResult verify_sumk_8x(const VerifyOptions&);
SuiteResult verify_decomposition(const VerifyOptions&);
SuiteResult verify_determinism(const VerifyOptions&);

}  // namespace probemin
