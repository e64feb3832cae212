#pragma once

#include <memory>

#include "probemin/matroid.hpp"
#include "probemin/model.hpp"
#include "probemin/policy.hpp"

namespace probemin {

// Brute-force optimal values on desk-scale instances. These are the ground
// truth every dominance and approximation check compares against, so they
// are written for transparency over speed: plain backward induction with
// exact rational values.

// Best adaptive P(trank(selection) >= target) under the knapsack budget.
// State: (probed bitmask, heads seen so far).
Rat opt_adaptive_rank_knapsack(const Instance& inst, const Rat& budget, int target, Weight t);

// Same recursion with "probed set stays independent" replacing affordability.
Rat opt_adaptive_rank_matroid(const Instance& inst, const Matroid& outer, int target, Weight t);

// Best adaptive P(mtrank(selection) >= target) under a cardinality budget.
// Below-threshold probes contract the inner matroid; above-threshold probes
// delete the element.
Rat opt_adaptive_mtrank_cardinality(const Instance& inst, const Matroid& inner, int budget, int target,
                                    Weight t);

// Validation twin of the above: no contraction shortcut, state is the full
// (probed bitmask, below-threshold bitmask) pair and any unprobed element may
// be probed. Small grounds only.
Rat opt_adaptive_mtrank_cardinality_nocontract(const Instance& inst, const Matroid& inner, int budget,
                                               int target, Weight t);

struct OracleRun {
  Rat value;
  std::uint64_t states_visited = 0;
};

// Full-information adaptive expectation minimum for the instance's declared
// objective and constraint, by backward induction over belief states
// (probed set plus every observed weight).
OracleRun opt_adaptive_expectation(const Instance& inst);

struct NonAdaptiveResult {
  Rat value;
  IdSet argmin = 0;
};

// Exhaustive over feasible sets; exact product evaluation. Returns the
// minimized failure probability P(min > t), with an argmin set.
NonAdaptiveResult opt_nonadaptive_threshold(const Instance& inst, Weight t);

// Exhaustive over feasible sets; exact E[f(S)] per set.
NonAdaptiveResult opt_nonadaptive_expectation(const Instance& inst);

// P(trank(s) >= target) for a fixed set: Poisson-binomial tail, exact.
Rat set_rank_success(const Instance& inst, IdSet s, Weight t, int target);

// P(mtrank(s) >= target) for a fixed set, by summing over below-threshold
// patterns of s.
Rat set_mtrank_success(const Instance& inst, const Matroid& inner, IdSet s, Weight t, int target);

// Executable optimal policies, for driving the meta-search with exact
// threshold solvers.
std::shared_ptr<const Policy> optimal_rank_knapsack_policy(const Instance& inst, const Rat& budget,
                                                           int target, Weight t);
std::shared_ptr<const Policy> optimal_min_element_threshold_policy(const Instance& inst, Weight t);

}  // namespace probemin
