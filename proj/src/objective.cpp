#include "probemin/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace probemin {

Value f_min(IdSet s, const Realization& x, int m) {
  Value best = m;
  for_each_id(s, [&](int e) { best = std::min<Value>(best, x.weights[e]); });
  return best;
}

Value y_i(IdSet s, const Realization& x, int i, int m) {
  if (i < 1) throw Error("y_i needs i >= 1");
  if (set_size(s) < i) return m;
  std::vector<Weight> w;
  w.reserve(set_size(s));
  for_each_id(s, [&](int e) { w.push_back(x.weights[e]); });
  std::nth_element(w.begin(), w.begin() + (i - 1), w.end());
  return w[i - 1];
}

Value f_mink(IdSet s, const Realization& x, int k, int m) {
  if (k < 1) throw Error("f_mink needs k >= 1");
  std::vector<Weight> w;
  w.reserve(set_size(s));
  for_each_id(s, [&](int e) { w.push_back(x.weights[e]); });
  std::sort(w.begin(), w.end());
  Value acc = 0;
  for (int i = 0; i < k; ++i) acc += i < static_cast<int>(w.size()) ? w[i] : m;
  return acc;
}

Value g_i(IdSet s, const Realization& x, const Matroid& inner, int i, int m) {
  if (i < 1) throw Error("g_i needs i >= 1");
  const auto basis = inner.min_weight_basis(x.weights, s & inner.ground());
  if (static_cast<int>(basis.size()) < i) return m;
  return x.weights[basis[i - 1]];
}

Value f_minbasis(IdSet s, const Realization& x, const Matroid& inner, int m) {
  const int k = inner.rank();
  const auto basis = inner.min_weight_basis(x.weights, s & inner.ground());
  Value acc = 0;
  for (int e : basis) acc += x.weights[e];
  acc += static_cast<Value>(k - basis.size()) * m;
  return acc;
}

int trank(IdSet s, const Realization& x, Weight t) {
  int count = 0;
  for_each_id(s, [&](int e) { count += x.weights[e] <= t ? 1 : 0; });
  return count;
}

int mtrank(const Matroid& inner, IdSet s, const Realization& x, Weight t) {
  IdSet below = 0;
  for_each_id(s & inner.ground(), [&](int e) {
    if (x.weights[e] <= t) below |= id_bit(e);
  });
  return inner.rank(below);
}

Rat width(const Instance& inst, IdSet s, Weight t) {
  Rat fail(1);
  for_each_id(s, [&](int e) { fail *= inst.above_prob(e, t); });
  return Rat(1) - fail;
}

double reward(const Instance& inst, ElementId e, Weight t) {
  const Rat q = inst.above_prob(e, t);
  if (q == 0) return std::numeric_limits<double>::infinity();
  return -std::log2(to_double(q));
}

Value objective_value(const Instance& inst, IdSet s, const Realization& x) {
  switch (inst.objective.kind) {
    case ObjectiveKind::MinElement:
      return f_min(s, x, inst.m);
    case ObjectiveKind::MinK:
      return f_mink(s, x, inst.k, inst.m);
    case ObjectiveKind::MinBasis:
      return f_minbasis(s, x, inst.inner(), inst.m);
  }
  throw Error("bad objective kind");
}

Value objective_bound(const Instance& inst) {
  switch (inst.objective.kind) {
    case ObjectiveKind::MinElement:
      return inst.m;
    case ObjectiveKind::MinK:
    case ObjectiveKind::MinBasis:
      return static_cast<Value>(inst.k) * inst.m;
  }
  throw Error("bad objective kind");
}

}  // namespace probemin
