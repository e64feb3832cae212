#include "probemin/solvers.hpp"

#include <algorithm>
#include <limits>

#include "probemin/objective.hpp"
#include "probemin/oracle.hpp"

namespace probemin {

Density density_key(const Instance& inst, ElementId e, Weight t) {
  const Rat q = inst.above_prob(e, t);
  const Rat& c = inst.elements[e].cost;
  if (q == 1) return {Density::Kind::Zero, q, c};  // reward 0
  if (q == 0 || c == 0) return {Density::Kind::Infinite, q, c};
  return {Density::Kind::Finite, q, c};
}

bool density_greater(const Density& a, const Density& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) > static_cast<int>(b.kind);
  if (a.kind != Density::Kind::Finite) return false;  // equal zero/infinite keys
  // (-log qa)/ca > (-log qb)/cb  <=>  qb^(na*db) > qa^(nb*da)
  // with ca = na/da, cb = nb/db positive.
  const BigInt ea = num(b.cost) * den(a.cost);
  const BigInt eb = num(a.cost) * den(b.cost);
  if (ea > 1000000 || eb > 1000000)
    throw Error("cost literals too wide for exact density comparison");
  return rat_pow(b.q, eb.convert_to<std::uint64_t>()) > rat_pow(a.q, ea.convert_to<std::uint64_t>());
}

std::vector<ElementId> density_order(const Instance& inst, IdSet pool, Weight t) {
  std::vector<std::pair<ElementId, Density>> keyed;
  for_each_id(pool, [&](int e) {
    Density d = density_key(inst, e, t);
    if (d.kind == Density::Kind::Zero && d.cost == 0) return;  // free, worthless
    keyed.emplace_back(e, std::move(d));
  });
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (density_greater(a.second, b.second)) return true;
    if (density_greater(b.second, a.second)) return false;
    return a.first < b.first;
  });
  std::vector<ElementId> out;
  out.reserve(keyed.size());
  for (const auto& [e, d] : keyed) out.push_back(e);
  return out;
}

GreedySelection ext_greedy(const Instance& inst, IdSet universe, const Rat& budget, int targets, Weight t) {
  GreedySelection sel;
  sel.total_cost = 0;
  sel.delta = 0;
  for_each_id(universe, [&](int e) { sel.delta = std::max(sel.delta, inst.elements[e].cost); });
  const Rat stop = budget + Rat(targets) * sel.delta;
  for (ElementId e : density_order(inst, universe, t)) {
    if (sel.total_cost >= stop) break;
    sel.order.push_back(e);
    sel.total_cost += inst.elements[e].cost;
    const Density d = density_key(inst, e, t);
    sel.densities[e] = d.kind == Density::Kind::Infinite ? std::numeric_limits<double>::infinity()
                       : d.kind == Density::Kind::Zero   ? 0.0
                                                         : reward(inst, e, t) / to_double(d.cost);
  }
  return sel;
}

GreedySelection density_greedy(const Instance& inst, const Rat& budget, Weight t) {
  IdSet pool = 0;
  for (const Element& e : inst.elements) {
    if (e.cost <= budget) pool |= id_bit(e.id);
  }
  return ext_greedy(inst, pool, budget, 0, t);
}

namespace {

int ceil_log2(int i) { return i <= 1 ? 0 : static_cast<int>(std::bit_width(static_cast<unsigned>(i - 1))); }

}  // namespace

BinSelection bin(const Instance& inst, const Rat& budget, int i, Weight t) {
  if (i < 1) throw Error("bin needs i >= 1");
  BinSelection out;
  const int z = ceil_log2(i);
  for (int j = 1; j <= z; ++j) {
    const Rat high = budget / rat_pow(Rat(2), j - 1);
    const Rat low = std::max(budget / rat_pow(Rat(2), j), budget / Rat(i));
    std::vector<ElementId> bucket;
    for (const Element& e : inst.elements) {
      if (e.cost > low && e.cost <= high) bucket.push_back(e.id);
    }
    std::stable_sort(bucket.begin(), bucket.end(), [&](ElementId a, ElementId b) {
      const Rat pa = inst.below_prob(a, t);
      const Rat pb = inst.below_prob(b, t);
      if (pa != pb) return pa > pb;
      return a < b;
    });
    IdSet level = 0;
    const int take = std::min<int>(1 << j, static_cast<int>(bucket.size()));
    for (int r = 0; r < take; ++r) level |= id_bit(bucket[r]);
    out.levels.push_back(level);
    out.all |= level;
  }
  return out;
}

IdSet rank_knapsack_set(const Instance& inst, const Rat& budget, int i, Weight t) {
  IdSet low_cost = 0;
  for (const Element& e : inst.elements) {
    if (e.cost * Rat(i) <= budget) low_cost |= id_bit(e.id);
  }
  const GreedySelection g = ext_greedy(inst, low_cost, budget, i, t);
  return g.set() | bin(inst, budget, i, t).all;
}

namespace {

class RankHandoffRun : public PolicyRun {
 public:
  RankHandoffRun(const Instance& inst, Rat budget, int target, Weight t,
                 std::vector<std::vector<ElementId>> bin_phases, IdSet low_cost)
      : inst_(inst), budget_(std::move(budget)), target_(target), t_(t),
        phases_(std::move(bin_phases)), low_cost_(low_cost) {}

  Action next() override {
    while (true) {
      if (phase_ < phases_.size()) {
        const auto& ids = phases_[phase_];
        if (pos_ < ids.size()) {
          if (pos_ == 0 && emitted_any_) {
            if (!phase_break_sent_) {
              phase_break_sent_ = true;
              return NextPhase{};
            }
            phase_break_sent_ = false;
          }
          emitted_any_ = true;
          return Probe{ids[pos_++]};
        }
        ++phase_;
        pos_ = 0;
        continue;
      }
      if (handoff_built_) return Stop{};
      // BIN probes are done; hand off to the greedy for the residual target.
      handoff_built_ = true;
      const int residual = std::max(target_ - heads_, 1);
      const auto tail = ext_greedy(inst_, low_cost_, budget_, residual, t_).order;
      for (auto& p : feasible_phases(inst_, tail)) phases_.push_back(std::move(p));
    }
  }

  void observe(ElementId, Weight w) override {
    if (!handoff_built_ && w <= t_) heads_ += 1;
  }

 private:
  const Instance& inst_;
  Rat budget_;
  int target_;
  Weight t_;
  std::vector<std::vector<ElementId>> phases_;
  IdSet low_cost_;
  std::size_t phase_ = 0;
  std::size_t pos_ = 0;
  bool emitted_any_ = false;
  bool phase_break_sent_ = false;
  bool handoff_built_ = false;
  int heads_ = 0;
};

class RankHandoffPolicy : public Policy {
 public:
  RankHandoffPolicy(Instance inst, Rat budget, int target, Weight t)
      : inst_(std::move(inst)), budget_(std::move(budget)), target_(target), t_(t) {
    const BinSelection c = bin(inst_, budget_, target_, t_);
    bin_phases_ = feasible_phases(inst_, set_to_ids(c.all));
    for (const Element& e : inst_.elements) {
      if (e.cost * Rat(target_) <= budget_) low_cost_ |= id_bit(e.id);
    }
  }

  std::unique_ptr<PolicyRun> start(const Instance&) const override {
    return std::make_unique<RankHandoffRun>(inst_, budget_, target_, t_, bin_phases_, low_cost_);
  }

  int max_feasible_sets(const Instance&) const override { return 2 * (inst_.size() + 1); }

 private:
  Instance inst_;
  Rat budget_;
  int target_;
  Weight t_;
  std::vector<std::vector<ElementId>> bin_phases_;
  IdSet low_cost_ = 0;
};

}  // namespace

std::unique_ptr<Policy> rank_knapsack_adaptive_policy(const Instance& inst, const Rat& budget, int i,
                                                      Weight t) {
  return std::make_unique<RankHandoffPolicy>(inst, budget, i, t);
}

std::vector<ElementId> mgreedy(const Instance& inst, const Matroid& outer, Weight t) {
  std::vector<ElementId> out;
  IdSet acc = 0;
  while (true) {
    int best = -1;
    Rat best_p(0);
    for_each_id(outer.ground() & ~acc, [&](int e) {
      if (!outer.is_independent(acc | id_bit(e))) return;
      const Rat p = inst.below_prob(e, t);
      if (best < 0 || p > best_p) {
        best = e;
        best_p = p;
      }
    });
    if (best < 0) break;
    acc |= id_bit(best);
    out.push_back(best);
  }
  return out;
}

namespace {

class AdapMGreedyRun : public PolicyRun {
 public:
  AdapMGreedyRun(const Instance& inst, const Matroid& inner, int budget, Weight t)
      : inst_(inst), inner_(inner), budget_(budget), t_(t) {}

  Action next() override {
    if (probes_ >= budget_) return Stop{};
    int best = -1;
    Rat best_p(0);
    for_each_id(inner_.ground() & ~probed_, [&](int e) {
      if (!inner_.is_independent(accepted_ | id_bit(e))) return;  // not useful
      const Rat p = inst_.below_prob(e, t_);
      if (best < 0 || p > best_p) {
        best = e;
        best_p = p;
      }
    });
    if (best < 0) return Stop{};
    return Probe{best};
  }

  void observe(ElementId e, Weight w) override {
    probed_ |= id_bit(e);
    probes_ += 1;
    if (w <= t_) accepted_ |= id_bit(e);
  }

 private:
  const Instance& inst_;
  Matroid inner_;
  int budget_;
  Weight t_;
  IdSet probed_ = 0;
  IdSet accepted_ = 0;
  int probes_ = 0;
};

class AdapMGreedyPolicy : public Policy {
 public:
  AdapMGreedyPolicy(Instance inst, Matroid inner, int budget, Weight t)
      : inst_(std::move(inst)), inner_(std::move(inner)), budget_(budget), t_(t) {}

  std::unique_ptr<PolicyRun> start(const Instance&) const override {
    return std::make_unique<AdapMGreedyRun>(inst_, inner_, budget_, t_);
  }

 private:
  Instance inst_;
  Matroid inner_;
  int budget_;
  Weight t_;
};

}  // namespace

std::unique_ptr<Policy> adap_mgreedy_policy(const Instance& inst, const Matroid& inner, int budget,
                                            Weight t) {
  if (inst.constraint.kind != ConstraintKind::Cardinality)
    throw Error("adap_mgreedy needs a cardinality constraint");
  return std::make_unique<AdapMGreedyPolicy>(inst, inner, budget, t);
}

Rat decomposition_residual(const Instance& inst, const std::vector<ElementId>& ordering, Weight t,
                           int target) {
  if (ordering.empty()) throw Error("decomposition needs a nonempty set");
  const IdSet full = ids_to_set(ordering);
  // First below-threshold probe at position j has mass width(P_j) - width(P_{j-1});
  // conditioned on it, the remainder must supply target - 1 more heads.
  Rat sum(0);
  IdSet prefix = 0;
  Rat prev_width(0);
  for (ElementId e : ordering) {
    prefix |= id_bit(e);
    const Rat w = width(inst, prefix, t);
    sum += (w - prev_width) * set_rank_success(inst, full & ~prefix, t, target - 1);
    prev_width = w;
  }
  const Rat direct = set_rank_success(inst, full, t, target);
  return sum >= direct ? sum - direct : direct - sum;
}

std::vector<std::vector<ElementId>> feasible_phases(const Instance& inst,
                                                    const std::vector<ElementId>& order) {
  std::vector<std::vector<ElementId>> phases;
  std::vector<ElementId> cur;
  IdSet cur_set = 0;
  Rat cur_cost(0);
  auto fits = [&](ElementId e) {
    switch (inst.constraint.kind) {
      case ConstraintKind::Knapsack:
        return cur_cost + inst.elements[e].cost <= inst.constraint.budget;
      case ConstraintKind::Cardinality:
        return set_size(cur_set) < inst.constraint.cardinality;
      case ConstraintKind::Matroid:
        return inst.outer().is_independent(cur_set | id_bit(e));
    }
    return false;
  };
  for (ElementId e : order) {
    if (!cur.empty() && !fits(e)) {
      phases.push_back(cur);
      cur.clear();
      cur_set = 0;
      cur_cost = 0;
    }
    if (!fits(e)) throw Error("element " + std::to_string(e) + " is infeasible on its own");
    cur.push_back(e);
    cur_set |= id_bit(e);
    cur_cost += inst.elements[e].cost;
  }
  if (!cur.empty()) phases.push_back(cur);
  return phases;
}

}  // namespace probemin
