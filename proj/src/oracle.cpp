#include "probemin/oracle.hpp"

#include <unordered_map>

#include "probemin/objective.hpp"

namespace probemin {

namespace {

std::vector<Rat> below_probs(const Instance& inst, Weight t) {
  std::vector<Rat> p;
  p.reserve(inst.size());
  for (const Element& e : inst.elements) p.push_back(e.dist.below_prob(t));
  return p;
}

using Memo = std::unordered_map<std::uint64_t, Rat>;

}  // namespace

Rat opt_adaptive_rank_knapsack(const Instance& inst, const Rat& budget, int target, Weight t) {
  const int n = inst.size();
  if (n > 20) throw CapExceeded("rank-knapsack oracle capped at 20 elements");
  if (target <= 0) return Rat(1);
  const auto p = below_probs(inst, t);
  Memo memo;
  // V(probed, heads): probe any affordable element or stop.
  std::function<Rat(IdSet, int, const Rat&)> value = [&](IdSet probed, int heads, const Rat& spent) -> Rat {
    if (heads >= target) return Rat(1);
    const std::uint64_t key = (static_cast<std::uint64_t>(probed) << 5) | static_cast<std::uint64_t>(heads);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rat best(0);
    for (int e = 0; e < n; ++e) {
      if (set_contains(probed, e)) continue;
      if (spent + inst.elements[e].cost > budget) continue;
      if (p[e] == 0) continue;  // can never add a head
      const Rat spent2 = spent + inst.elements[e].cost;
      Rat v = p[e] * value(probed | id_bit(e), heads + 1, spent2);
      if (p[e] != 1) v += (Rat(1) - p[e]) * value(probed | id_bit(e), heads, spent2);
      if (v > best) best = v;
    }
    memo.emplace(key, best);
    return best;
  };
  return value(0, 0, Rat(0));
}

Rat opt_adaptive_rank_matroid(const Instance& inst, const Matroid& outer, int target, Weight t) {
  const int n = inst.size();
  if (n > 14) throw CapExceeded("rank-matroid oracle capped at 14 elements");
  if (target <= 0) return Rat(1);
  const auto p = below_probs(inst, t);
  Memo memo;
  std::function<Rat(IdSet, int)> value = [&](IdSet probed, int heads) -> Rat {
    if (heads >= target) return Rat(1);
    const std::uint64_t key = (static_cast<std::uint64_t>(probed) << 5) | static_cast<std::uint64_t>(heads);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rat best(0);
    for_each_id(outer.ground() & ~probed, [&](int e) {
      if (!outer.is_independent(probed | id_bit(e))) return;
      if (p[e] == 0) return;
      Rat v = p[e] * value(probed | id_bit(e), heads + 1);
      if (p[e] != 1) v += (Rat(1) - p[e]) * value(probed | id_bit(e), heads);
      if (v > best) best = v;
    });
    memo.emplace(key, best);
    return best;
  };
  return value(0, 0);
}

Rat opt_adaptive_mtrank_cardinality(const Instance& inst, const Matroid& inner, int budget, int target,
                                    Weight t) {
  const int n = inst.size();
  if (n > 12) throw CapExceeded("mtrank oracle capped at 12 elements");
  if (budget > n) budget = n;
  if (target <= 0) return Rat(1);
  const auto p = below_probs(inst, t);
  Memo memo;
  // State: (probed, accepted). accepted is the independent below-threshold
  // set maintained so far; a below-threshold probe of a useful element
  // contracts the inner matroid by it, which is exactly "accept".
  std::function<Rat(IdSet, IdSet)> value = [&](IdSet probed, IdSet accepted) -> Rat {
    const int have = set_size(accepted);
    if (have >= target) return Rat(1);
    if (budget - set_size(probed) < target - have) return Rat(0);
    const std::uint64_t key = (static_cast<std::uint64_t>(probed) << 16) | static_cast<std::uint64_t>(accepted);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rat best(0);
    for_each_id(inner.ground() & ~probed, [&](int e) {
      // Useful elements only: accepted + e must stay independent.
      if (!inner.is_independent(accepted | id_bit(e))) return;
      if (p[e] == 0) return;
      Rat v = p[e] * value(probed | id_bit(e), accepted | id_bit(e));
      if (p[e] != 1) v += (Rat(1) - p[e]) * value(probed | id_bit(e), accepted);
      if (v > best) best = v;
    });
    memo.emplace(key, best);
    return best;
  };
  return value(0, 0);
}

Rat opt_adaptive_mtrank_cardinality_nocontract(const Instance& inst, const Matroid& inner, int budget,
                                               int target, Weight t) {
  const int n = inst.size();
  if (n > 10) throw CapExceeded("no-contraction mtrank oracle capped at 10 elements");
  if (budget > n) budget = n;
  if (target <= 0) return Rat(1);
  const auto p = below_probs(inst, t);
  Memo memo;
  std::function<Rat(IdSet, IdSet)> value = [&](IdSet probed, IdSet below) -> Rat {
    if (inner.rank(below) >= target) return Rat(1);
    if (set_size(probed) >= budget) return Rat(0);
    const std::uint64_t key = (static_cast<std::uint64_t>(probed) << 16) | static_cast<std::uint64_t>(below);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Rat best(0);
    for (int e = 0; e < n; ++e) {
      if (set_contains(probed, e)) continue;
      Rat v(0);
      if (p[e] != 0) v += p[e] * value(probed | id_bit(e), below | id_bit(e));
      if (p[e] != 1) v += (Rat(1) - p[e]) * value(probed | id_bit(e), below);
      if (v > best) best = v;
    }
    memo.emplace(key, best);
    return best;
  };
  return value(0, 0);
}

OracleRun opt_adaptive_expectation(const Instance& inst) {
  const int n = inst.size();
  // Sum over masks of per-mask outcome counts equals prod (1 + |support|).
  const std::uint64_t cap = state_cap();
  std::uint64_t states = 1;
  std::vector<std::uint64_t> radix(n, 1);
  std::uint64_t code_span = 1;
  for (int e = 0; e < n; ++e) {
    radix[e] = code_span;
    code_span *= inst.elements[e].dist.support.size();
    states *= 1 + inst.elements[e].dist.support.size();
    if (states > cap || code_span > cap) throw CapExceeded("belief-state space exceeds cap");
  }
  OracleRun run;
  run.states_visited = 0;
  std::unordered_map<std::uint64_t, Rat> memo;
  Realization x;
  x.weights.assign(n, 0);
  std::vector<int> idx(n, 0);

  const Matroid outer = inst.constraint.kind == ConstraintKind::Matroid ? inst.outer()
                                                                        : Matroid::uniform(inst.universe(), n);
  std::function<Rat(IdSet, const Rat&)> value = [&](IdSet probed, const Rat& spent) -> Rat {
    std::uint64_t code = 0;
    for_each_id(probed, [&](int e) { code += radix[e] * static_cast<std::uint64_t>(idx[e]); });
    const std::uint64_t key = static_cast<std::uint64_t>(probed) * code_span + code;
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    run.states_visited += 1;
    // Stopping is always allowed; f only reads probed elements.
    Rat best(objective_value(inst, probed, x));
    for (int e = 0; e < n; ++e) {
      if (set_contains(probed, e)) continue;
      switch (inst.constraint.kind) {
        case ConstraintKind::Knapsack:
          if (spent + inst.elements[e].cost > inst.constraint.budget) continue;
          break;
        case ConstraintKind::Cardinality:
          if (set_size(probed) >= inst.constraint.cardinality) continue;
          break;
        case ConstraintKind::Matroid:
          if (!outer.is_independent(probed | id_bit(e))) continue;
          break;
      }
      Rat expect(0);
      const auto& support = inst.elements[e].dist.support;
      for (int j = 0; j < static_cast<int>(support.size()); ++j) {
        if (support[j].second == 0) continue;
        idx[e] = j;
        x.weights[e] = support[j].first;
        expect += support[j].second * value(probed | id_bit(e), spent + inst.elements[e].cost);
      }
      idx[e] = 0;
      x.weights[e] = 0;
      if (expect < best) best = expect;
    }
    memo.emplace(key, best);
    return best;
  };
  run.value = value(0, Rat(0));
  return run;
}

namespace {

bool feasible_set(const Instance& inst, const Matroid* outer, IdSet s) {
  switch (inst.constraint.kind) {
    case ConstraintKind::Knapsack:
      return inst.cost_of(s) <= inst.constraint.budget;
    case ConstraintKind::Cardinality:
      return set_size(s) <= inst.constraint.cardinality;
    case ConstraintKind::Matroid:
      return (s & ~outer->ground()) == 0 && outer->is_independent(s);
  }
  return false;
}

}  // namespace

NonAdaptiveResult opt_nonadaptive_threshold(const Instance& inst, Weight t) {
  const int n = inst.size();
  if (n > 20) throw CapExceeded("non-adaptive enumeration capped at 20 elements");
  const Matroid outer = inst.constraint.kind == ConstraintKind::Matroid ? inst.outer()
                                                                        : Matroid::uniform(inst.universe(), n);
  NonAdaptiveResult best{Rat(1), 0};  // the empty set is always feasible
  for (IdSet s = 0; s < (IdSet{1} << n); ++s) {
    if (!feasible_set(inst, &outer, s)) continue;
    Rat fail(1);
    for_each_id(s, [&](int e) { fail *= inst.above_prob(e, t); });
    if (fail < best.value) best = {fail, s};
  }
  return best;
}

NonAdaptiveResult opt_nonadaptive_expectation(const Instance& inst) {
  const int n = inst.size();
  if (n > 20) throw CapExceeded("non-adaptive enumeration capped at 20 elements");
  const Matroid outer = inst.constraint.kind == ConstraintKind::Matroid ? inst.outer()
                                                                        : Matroid::uniform(inst.universe(), n);
  bool first = true;
  NonAdaptiveResult best;
  for (IdSet s = 0; s < (IdSet{1} << n); ++s) {
    if (!feasible_set(inst, &outer, s)) continue;
    // E[f(s)] over the sub-profile of s only.
    Rat expect(0);
    Realization x;
    x.weights.assign(n, 0);
    std::vector<int> ids = set_to_ids(s);
    std::function<void(std::size_t, const Rat&)> walk = [&](std::size_t pos, const Rat& prob) {
      if (pos == ids.size()) {
        expect += prob * objective_value(inst, s, x);
        return;
      }
      for (const auto& [v, p] : inst.elements[ids[pos]].dist.support) {
        if (p == 0) continue;
        x.weights[ids[pos]] = v;
        walk(pos + 1, prob * p);
      }
    };
    walk(0, Rat(1));
    if (first || expect < best.value) {
      best = {expect, s};
      first = false;
    }
  }
  if (first) throw Error("no feasible set");
  return best;
}

Rat set_rank_success(const Instance& inst, IdSet s, Weight t, int target) {
  if (target <= 0) return Rat(1);
  const int cap = target;
  // dist[h] = P(h heads so far), heads capped at target.
  std::vector<Rat> dist(static_cast<std::size_t>(cap) + 1, Rat(0));
  dist[0] = 1;
  for_each_id(s, [&](int e) {
    const Rat p = inst.below_prob(e, t);
    std::vector<Rat> next(dist.size(), Rat(0));
    for (int h = 0; h <= cap; ++h) {
      if (dist[h] == 0) continue;
      const int up = std::min(cap, h + 1);
      next[up] += dist[h] * p;
      next[h] += dist[h] * (Rat(1) - p);
    }
    dist.swap(next);
  });
  return dist[static_cast<std::size_t>(cap)];
}

Rat set_mtrank_success(const Instance& inst, const Matroid& inner, IdSet s, Weight t, int target) {
  if (target <= 0) return Rat(1);
  const std::vector<int> ids = set_to_ids(s);
  Rat acc(0);
  std::function<void(std::size_t, IdSet, const Rat&)> walk = [&](std::size_t pos, IdSet below, const Rat& prob) {
    if (prob == 0) return;
    if (pos == ids.size()) {
      if (inner.rank(below & inner.ground()) >= target) acc += prob;
      return;
    }
    const int e = ids[pos];
    const Rat p = inst.below_prob(e, t);
    walk(pos + 1, below | id_bit(e), prob * p);
    walk(pos + 1, below, prob * (Rat(1) - p));
  };
  walk(0, 0, Rat(1));
  return acc;
}

namespace {

// The rank-knapsack DP table, precomputed once over all reachable states so
// that individual runs can replay argmax choices without recomputation.
struct RankDpTable {
  Instance inst;
  Rat budget;
  int target;
  Weight t;
  std::vector<Rat> p;
  Memo memo;

  static std::uint64_t key(IdSet probed, int heads) {
    return (static_cast<std::uint64_t>(probed) << 5) | static_cast<std::uint64_t>(heads);
  }

  const Rat& value(IdSet probed, int heads) const {
    static const Rat one(1);
    if (heads >= target) return one;
    return memo.at(key(probed, heads));
  }

  Rat fill(IdSet probed, int heads, const Rat& spent) {
    if (heads >= target) return Rat(1);
    if (auto it = memo.find(key(probed, heads)); it != memo.end()) return it->second;
    Rat best(0);
    for (int e = 0; e < inst.size(); ++e) {
      if (set_contains(probed, e)) continue;
      if (spent + inst.elements[e].cost > budget) continue;
      if (p[e] == 0) continue;
      const Rat spent2 = spent + inst.elements[e].cost;
      Rat v = p[e] * fill(probed | id_bit(e), heads + 1, spent2);
      if (p[e] != 1) v += (Rat(1) - p[e]) * fill(probed | id_bit(e), heads, spent2);
      if (v > best) best = v;
    }
    memo.emplace(key(probed, heads), best);
    return best;
  }
};

// Replays the precomputed DP: at every state, probe the argmax child.
class OptimalRankRun : public PolicyRun {
 public:
  explicit OptimalRankRun(std::shared_ptr<const RankDpTable> dp) : dp_(std::move(dp)) {}

  Action next() override {
    if (heads_ >= dp_->target) return Stop{};
    const Instance& inst = dp_->inst;
    int best_e = -1;
    Rat best(0);
    for (int e = 0; e < inst.size(); ++e) {
      if (set_contains(probed_, e)) continue;
      if (spent_ + inst.elements[e].cost > dp_->budget) continue;
      if (dp_->p[e] == 0) continue;
      Rat v = dp_->p[e] * dp_->value(probed_ | id_bit(e), heads_ + 1);
      if (dp_->p[e] != 1) v += (Rat(1) - dp_->p[e]) * dp_->value(probed_ | id_bit(e), heads_);
      if (best_e < 0 || v > best) {
        best = v;
        best_e = e;
      }
    }
    if (best_e < 0 || best == 0) return Stop{};
    return Probe{best_e};
  }

  void observe(ElementId e, Weight w) override {
    probed_ |= id_bit(e);
    spent_ += dp_->inst.elements[e].cost;
    if (w <= dp_->t) heads_ += 1;
  }

 private:
  std::shared_ptr<const RankDpTable> dp_;
  IdSet probed_ = 0;
  int heads_ = 0;
  Rat spent_ = Rat(0);
};

class OptimalRankPolicy : public Policy {
 public:
  OptimalRankPolicy(const Instance& inst, const Rat& budget, int target, Weight t) {
    if (inst.size() > 20) throw CapExceeded("rank-knapsack oracle policy capped at 20 elements");
    auto dp = std::make_shared<RankDpTable>();
    dp->inst = inst;
    dp->budget = budget;
    dp->target = target;
    dp->t = t;
    dp->p = below_probs(inst, t);
    dp->fill(0, 0, Rat(0));
    dp_ = std::move(dp);
  }

  std::unique_ptr<PolicyRun> start(const Instance&) const override {
    return std::make_unique<OptimalRankRun>(dp_);
  }

 private:
  std::shared_ptr<const RankDpTable> dp_;
};

}  // namespace

std::shared_ptr<const Policy> optimal_rank_knapsack_policy(const Instance& inst, const Rat& budget,
                                                           int target, Weight t) {
  return std::make_shared<OptimalRankPolicy>(inst, budget, target, t);
}

std::shared_ptr<const Policy> optimal_min_element_threshold_policy(const Instance& inst, Weight t) {
  const auto best = opt_nonadaptive_threshold(inst, t);
  std::vector<ElementId> ids = set_to_ids(best.argmin);
  return std::shared_ptr<const Policy>(make_set_policy(ids).release());
}

}  // namespace probemin
