// Acceptance harness: runs the verification suites at their pinned sizes and
// prints one line per criterion. Exit code is the number of failed criteria.
//
//   acceptance                 run everything
//   acceptance --criterion N   run criterion N only
//   acceptance --list          list criteria

#include <chrono>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "probemin/verify.hpp"

using namespace probemin;

namespace {

struct Criterion {
  int number;
  std::string title;
  std::string suite;
  long long max_ms;  // runtime budget; exceeding it fails the criterion
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "adaptivity-gap reproduction (exact, N in {4,10,100})", "gap-example", 1000},
      {2, "min-element threshold adaptivity gap = 1 on 200 instances", "no-gap", 30000},
      {3, "density greedy (1,2)-approximation on the same instances", "no-gap", 30000},
      {4, "extended-greedy dominance for every target, costs <= B/i", "extgreedy-dominance", 120000},
      {5, "BIN + extended greedy value and cost inequalities", "bin-value", 120000},
      {6, "extended-greedy nesting on 1000 draws", "nesting", 10000},
      {7, "matroid greedy rank optimality, exact equality", "mgreedy-opt", 120000},
      {8, "adaptive matroid greedy mtrank optimality, exact equality", "adapmgreedy-opt", 120000},
      {9, "meta-search 4x bound, UB interval identity, call count", "metamin-4x", 300000},
      {10, "sum-of-k 8x bound and run count", "sumk-8x", 300000},
      {11, "rectangle decomposition residual is exactly zero", "decomposition", 30000},
      {12, "determinism and Monte Carlo statistics", "determinism", 30000},
  };
  return list;
}

// Criteria 2 and 3 share one suite run; pick the checks that belong to each.
bool criterion_passes(const Criterion& crit, const SuiteResult& suite, std::string& detail) {
  bool pass = true;
  for (const auto& check : suite.checks) {
    const bool is_density = check.name.find("density greedy") != std::string::npos;
    if (crit.number == 2 && is_density) continue;
    if (crit.number == 3 && !is_density) continue;
    if (!check.pass) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += check.name + " [" + check.detail + "]";
    }
  }
  return pass;
}

int run_criterion(const Criterion& crit) {
  VerifyOptions options;
  const auto start = std::chrono::steady_clock::now();
  SuiteResult suite;
  try {
    suite = run_suite(crit.suite, options);
  } catch (const std::exception& e) {
    std::cout << "[FAIL] criterion " << crit.number << ": " << crit.title << " — exception: " << e.what()
              << "\n";
    return 1;
  }
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  std::string detail;
  bool pass = criterion_passes(crit, suite, detail);
  if (elapsed.count() > crit.max_ms) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += "over the " + std::to_string(crit.max_ms) + " ms budget";
  }
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << crit.number << ": " << crit.title << " ("
            << elapsed.count() << " ms)";
  if (!pass) std::cout << " — " << detail;
  std::cout << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--list") == 0) {
      for (const auto& crit : criteria())
        std::cout << crit.number << ": " << crit.title << " (suite " << crit.suite << ")\n";
      return 0;
    }
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    }
  }
  int failures = 0;
  for (const auto& crit : criteria()) {
    if (only != 0 && crit.number != only) continue;
    failures += run_criterion(crit);
  }
  if (only == 0) {
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
  }
  return failures;
}
