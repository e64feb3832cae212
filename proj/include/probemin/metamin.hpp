#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "probemin/model.hpp"
#include "probemin/policy.hpp"

namespace probemin {

// Adaptive binary search over the power-of-two threshold grid. A threshold
// solver is consulted per probed threshold; succeeding at t prunes every
// grid entry >= t, failing prunes every entry <= t.

// {0} U {2^j : j = 0..floor(log2 M)}, ascending. M >= 1.
std::vector<Value> threshold_grid(Value value_bound);

// 1 + ceil(log2(floor(log2 M) + 2)): the t=0 call plus the binary search.
int metamin_call_bound(Value value_bound);

// Objective evaluated on a set from revealed weights only (weights indexed
// by element id, valid on the set's members).
using SetObjective = std::function<Value(IdSet, const std::vector<Weight>&)>;

// Returns the sub-policy to run for the threshold problem at t. Solvers are
// typically cached per t inside the callable.
using ThresholdSolver = std::function<std::shared_ptr<const Policy>(Value t)>;

struct MetaMinOptions {
  // Evaluate the success test on the running union instead of the last
  // solver's own selection. Diagnostic mode only; the analyzed algorithm
  // tests the solver's selection alone.
  bool test_on_union = false;
  // Declared feasible sets per threshold-solver call.
  int beta_per_call = 1;
};

std::unique_ptr<Policy> make_metamin(ThresholdSolver solver, SetObjective objective, Value value_bound,
                                     MetaMinOptions options = {});

// Sum-of-k driver: one metamin run per index i in {2^j <= k}, descending, on
// the per-index objective g_i with value bound m. The final selection is the
// union across runs.
using IndexedThresholdSolver = std::function<std::shared_ptr<const Policy>(int index, Value t)>;
using IndexedSetObjective = std::function<SetObjective(int index)>;

std::unique_ptr<Policy> make_sum_of_k(IndexedThresholdSolver solver, IndexedSetObjective objective, int k,
                                      int m, MetaMinOptions options = {});

// Per-realization audit of the upper-bound interval identity: UB lands in
// (a, b] exactly when the run failed at a and succeeded at b, for adjacent
// grid entries a < b (b = m for the last interval, where success is vacuous).
bool ub_interval_claim_holds(const MetaMinRunSummary& run, Value value_bound);

}  // namespace probemin
