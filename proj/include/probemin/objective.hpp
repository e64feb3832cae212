#pragma once

#include "probemin/matroid.hpp"
#include "probemin/model.hpp"

namespace probemin {

// Every objective is non-increasing in the selection set. Cases the raw
// definitions leave open (empty set, too few elements, rank-deficient sets)
// are padded with the sentinel m, which keeps each coordinate in [0, m].

Value f_min(IdSet s, const Realization& x, int m);

// i-th order statistic of the weights in s (1-based); m when |s| < i.
Value y_i(IdSet s, const Realization& x, int i, int m);

// Sum of the k smallest weights in s, padded with m.
Value f_mink(IdSet s, const Realization& x, int k, int m);

// Weight of the i-th element (ascending) of the greedy min-weight basis of s
// in the inner matroid; m when rank(s) < i.
Value g_i(IdSet s, const Realization& x, const Matroid& inner, int i, int m);

// Total weight of the greedy min-weight basis, padded to the full inner rank.
Value f_minbasis(IdSet s, const Realization& x, const Matroid& inner, int m);

// Number of below-threshold elements in s.
int trank(IdSet s, const Realization& x, Weight t);

// Size of the largest independent below-threshold subset of s.
int mtrank(const Matroid& inner, IdSet s, const Realization& x, Weight t);

// Probability that at least one element of s is below threshold:
// 1 - prod P(X_e > t). Exact.
Rat width(const Instance& inst, IdSet s, Weight t);

// -log2 P(X_e > t); +infinity when P(X_e > t) = 0. Only orderings of rewards
// matter, and those are computed exactly elsewhere; this is the float view.
double reward(const Instance& inst, ElementId e, Weight t);

// Dispatch on the instance's declared objective.
Value objective_value(const Instance& inst, IdSet s, const Realization& x);
// Largest value the declared objective can take (m or k * m).
Value objective_bound(const Instance& inst);

}  // namespace probemin
