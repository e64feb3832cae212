#pragma once

#include <cstdint>
#include <memory>

#include "probemin/matroid.hpp"
#include "probemin/model.hpp"
#include "probemin/policy.hpp"

namespace probemin {

// Deterministic generators for verification suites. Everything is a pure
// function of the RNG state, with rational probabilities so exact checks
// apply.

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  int uniform(int lo, int hi);  // inclusive
  // Probability a/d with a in [0, d]; d drawn from small denominators.
  Rat probability(bool allow_zero_one = true);

 private:
  std::uint64_t state_;
};

struct KnapsackGenOptions {
  int min_n = 2;
  int max_n = 10;
  int max_m = 4;
  int max_support = 3;
  int max_cost = 4;
  // Costs drawn from [1, floor(B / cost_divisor)] when cost_divisor > 0;
  // otherwise from [1, max_cost] with budget chosen afterwards.
  int cost_divisor = 0;
};

struct GeneratedKnapsack {
  Instance instance;
  Weight t = 0;
};

GeneratedKnapsack random_knapsack_instance(TestRng& rng, const KnapsackGenOptions& options);

// Matroid over ground {0..n-1}: uniform, partition, or an explicit family
// realized as the independent sets of random GF(2) vectors (always a
// matroid).
MatroidSpec random_matroid_spec(TestRng& rng, int n, int max_rank);

struct GeneratedMatroidInstance {
  Instance instance;  // matroid-constrained, min_k objective
  Weight t = 0;
};

GeneratedMatroidInstance random_matroid_rank_instance(TestRng& rng, int max_n, int max_rank);

struct GeneratedMinBasis {
  Instance instance;  // cardinality-constrained, min_basis objective
  Weight t = 0;
  int budget = 0;
};

GeneratedMinBasis random_minbasis_instance(TestRng& rng, int max_n, int max_budget);

// The three-element instance whose adaptivity gap is at least N/2:
// X_0 = N^2 w.p. 1/N^2 and 1 otherwise; X_1 = N^2 w.p. 1/N and 0 otherwise;
// X_2 = N surely. Pick two of three, minimize the minimum.
Instance gap_instance(long long N);

// Probe element 0; probe the risky element 1 only once a value of 1 is
// already secured, element 2 otherwise. Expectation (2N^2 - 1) / N^3.
std::unique_ptr<Policy> gap_adaptive_policy();
Rat gap_policy_expectation(long long N);

}  // namespace probemin
