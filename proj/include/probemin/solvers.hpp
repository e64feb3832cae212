#pragma once

#include <map>
#include <memory>
#include <vector>

#include "probemin/matroid.hpp"
#include "probemin/model.hpp"
#include "probemin/policy.hpp"

namespace probemin {

// Reward density -log2 P(X_e > t) / c_e as an exactly comparable key.
// Densities are ordered without floating logs: for finite entries,
// d1 > d2 iff q2^(c1 as integers) > q1^(c2 as integers) after clearing
// denominators. Infinite densities (certain heads, or free elements with
// positive reward) sort first; ties break by id.
struct Density {
  enum class Kind { Zero, Finite, Infinite };
  Kind kind = Kind::Zero;
  Rat q;     // P(X_e > t), finite case
  Rat cost;  // > 0, finite case
};

Density density_key(const Instance& inst, ElementId e, Weight t);
// Strict "greater density" comparison.
bool density_greater(const Density& a, const Density& b);

// Ids of the pool in greedy order: descending density, ties by id.
// Zero-cost zero-reward elements are dropped.
std::vector<ElementId> density_order(const Instance& inst, IdSet pool, Weight t);

struct GreedySelection {
  std::vector<ElementId> order;  // addition order
  Rat total_cost;
  Rat delta;                        // max element cost in the universe passed
  std::map<ElementId, double> densities;  // float view, for reports
  IdSet set() const { return ids_to_set(order); }
};

// Greedy by density until cost(G) >= budget + targets * delta or the pool is
// exhausted; overflows by at most one element.
GreedySelection ext_greedy(const Instance& inst, IdSet universe, const Rat& budget, int targets, Weight t);

// Min-element knapsack threshold greedy: drop elements costing more than the
// budget, then run the overflowing greedy with plain budget stopping. The
// result is a union of at most two feasible sets (all-but-last, last).
GreedySelection density_greedy(const Instance& inst, const Rat& budget, Weight t);

struct BinSelection {
  std::vector<IdSet> levels;  // C_j for j = 1..ceil(log2 i)
  IdSet all = 0;
};

// Cost-bucketed backup set: level j covers costs in (max(B/2^j, B/i), B/2^(j-1)]
// and keeps the 2^j highest below-threshold probabilities.
BinSelection bin(const Instance& inst, const Rat& budget, int i, Weight t);

// The non-adaptive i-th rank knapsack solver: ExtGreedy on the low-cost
// universe joined with the BIN backup set.
IdSet rank_knapsack_set(const Instance& inst, const Rat& budget, int i, Weight t);

// Adaptive variant: probe the BIN set first, then run ExtGreedy for the
// residual target max(i - trank(C), 1). Optional mode; the non-adaptive
// union above is the primary.
std::unique_ptr<Policy> rank_knapsack_adaptive_policy(const Instance& inst, const Rat& budget, int i,
                                                      Weight t);

// Matroid greedy: grow a basis by repeatedly taking the feasible element of
// highest below-threshold probability. Optimal for every rank target at once.
std::vector<ElementId> mgreedy(const Instance& inst, const Matroid& outer, Weight t);

// Adaptive matroid greedy for the min-basis cardinality rank problem: keep an
// independent set T of accepted below-threshold elements; probe the best
// element that would extend T, for at most `budget` probes.
std::unique_ptr<Policy> adap_mgreedy_policy(const Instance& inst, const Matroid& inner, int budget,
                                            Weight t);

// Rectangle decomposition of a fixed set's success probability along the
// given probe ordering; returns |decomposition - P(trank >= target)|, which
// must be exactly zero.
Rat decomposition_residual(const Instance& inst, const std::vector<ElementId>& ordering, Weight t,
                           int target);

// Splits an ordered selection into consecutive constraint-feasible phases,
// for ledger accounting of non-adaptive unions.
std::vector<std::vector<ElementId>> feasible_phases(const Instance& inst, const std::vector<ElementId>& order);

}  // namespace probemin
