#include "probemin/policy.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace probemin {

namespace {

class SetPolicyRun : public PolicyRun {
 public:
  explicit SetPolicyRun(const std::vector<std::vector<ElementId>>* phases) : phases_(phases) {}

  Action next() override {
    while (phase_ < phases_->size()) {
      const auto& ids = (*phases_)[phase_];
      if (pos_ < ids.size()) {
        if (!phase_opened_) {
          phase_opened_ = true;
          if (phase_ > 0) return NextPhase{};
        }
        return Probe{ids[pos_++]};
      }
      ++phase_;
      pos_ = 0;
      phase_opened_ = false;
    }
    return Stop{};
  }

  void observe(ElementId, Weight) override {}

 private:
  const std::vector<std::vector<ElementId>>* phases_;
  std::size_t phase_ = 0;
  std::size_t pos_ = 0;
  bool phase_opened_ = false;
};

class SetPolicy : public Policy {
 public:
  explicit SetPolicy(std::vector<std::vector<ElementId>> phases) : phases_(std::move(phases)) {}

  std::unique_ptr<PolicyRun> start(const Instance&) const override {
    return std::make_unique<SetPolicyRun>(&phases_);
  }

  int max_feasible_sets(const Instance&) const override {
    int nonempty = 0;
    for (const auto& p : phases_) nonempty += p.empty() ? 0 : 1;
    return nonempty;
  }

 private:
  std::vector<std::vector<ElementId>> phases_;
};

bool phase_feasible(const Instance& inst, IdSet s) {
  switch (inst.constraint.kind) {
    case ConstraintKind::Knapsack:
      return inst.cost_of(s) <= inst.constraint.budget;
    case ConstraintKind::Cardinality:
      return set_size(s) <= inst.constraint.cardinality;
    case ConstraintKind::Matroid:
      return inst.outer().is_independent(s);
  }
  return false;
}

}  // namespace

std::unique_ptr<Policy> make_phased_policy(std::vector<std::vector<ElementId>> phases) {
  return std::make_unique<SetPolicy>(std::move(phases));
}

std::unique_ptr<Policy> make_set_policy(const std::vector<ElementId>& ids) {
  return std::make_unique<SetPolicy>(std::vector<std::vector<ElementId>>{ids});
}

RunReport execute(const Policy& policy, const Instance& inst, const Realization& x) {
  if (static_cast<int>(x.weights.size()) != inst.size())
    throw Error("realization length does not match the universe");
  auto run = policy.start(inst);
  RunReport report;
  IdSet revealed = 0;
  IdSet phase_set = 0;
  PhaseCost phase;

  auto close_phase = [&]() {
    if (phase.elements.empty()) return;
    if (!phase_feasible(inst, phase_set))
      throw std::logic_error("policy phase violates the constraint");
    report.cost_ledger.push_back(phase);
    report.feasible_set_count += 1;
    phase = PhaseCost{};
    phase_set = 0;
  };

  while (true) {
    const Action a = run->next();
    if (std::holds_alternative<Stop>(a)) break;
    if (std::holds_alternative<NextPhase>(a)) {
      close_phase();
      continue;
    }
    const ElementId e = std::get<Probe>(a).id;
    if (e < 0 || e >= inst.size()) throw std::logic_error("probe outside the universe");
    if (set_contains(phase_set, e)) throw std::logic_error("duplicate probe within a phase");
    phase_set |= id_bit(e);
    phase.cost += inst.elements[e].cost;
    phase.elements.push_back(e);
    report.selection |= id_bit(e);
    if (!set_contains(revealed, e)) {
      revealed |= id_bit(e);
      report.probe_count += 1;
    }
    // A re-selected element re-uses its cached outcome; no second reveal.
    run->observe(e, x.weights[e]);
  }
  close_phase();

  if (report.feasible_set_count > policy.max_feasible_sets(inst))
    throw std::logic_error("policy exceeded its declared feasible-set bound");
  report.objective_value = objective_value(inst, report.selection, x);
  run->finalize(report);
  if (report.ub_value && report.objective_value > *report.ub_value)
    throw std::logic_error("objective above its declared upper bound");
  return report;
}

void for_each_outcome_report(const Policy& policy, const Instance& inst,
                             const std::function<void(const Realization&, const Rat&, const RunReport&)>& fn) {
  for_each_realization(inst, [&](const Realization& x, const Rat& prob) {
    fn(x, prob, execute(policy, inst, x));
  });
}

Rat ExactEvaluation::tail_at(Value t) const {
  Rat acc(0);
  for (auto it = value_dist.rbegin(); it != value_dist.rend() && it->first > t; ++it) acc += it->second;
  return acc;
}

ExactEvaluation exact_expected_objective(const Policy& policy, const Instance& inst) {
  constexpr Value kDenseTailCutoff = 65536;
  const Value bound = objective_bound(inst);
  ExactEvaluation out;
  out.expectation = 0;
  std::map<Value, Rat> dist;
  for_each_outcome_report(policy, inst, [&](const Realization&, const Rat& prob, const RunReport& rep) {
    const Value v = rep.objective_value;
    if (v < 0 || v > bound) throw std::logic_error("objective value outside [0, bound]");
    out.expectation += prob * v;
    dist[v] += prob;
  });
  out.value_dist.assign(dist.begin(), dist.end());

  // E[f] = sum_t P(f > t), exactly: the tail of an integer variable in
  // [0, bound] sums to its expectation.
  Rat tail_sum(0);
  for (const auto& [v, p] : out.value_dist) tail_sum += Rat(v) * p;
  if (tail_sum != out.expectation) throw std::logic_error("tail-sum identity violated");

  // Powers-of-two condensation: sum a_t <= a_0 + sum_j a_{2^j} 2^j <= 2 sum a_t.
  if (bound >= 1) {
    Rat condensed = out.tail_at(0);
    for (Value p = 1; p <= bound; p *= 2) condensed += out.tail_at(p) * Rat(p);
    if (condensed < tail_sum || condensed > 2 * tail_sum)
      throw std::logic_error("condensation sandwich violated");
  }
  if (bound <= kDenseTailCutoff) {
    // Suffix-cumulative fill: tail[t] = P(f > t).
    out.tail.assign(static_cast<std::size_t>(bound) + 1, Rat(0));
    Rat suffix(0);
    Value upper = bound;
    for (auto it = out.value_dist.rbegin(); it != out.value_dist.rend(); ++it) {
      for (Value t = upper - 1; t >= it->first; --t) out.tail[static_cast<std::size_t>(t)] = suffix;
      upper = it->first;
      suffix += it->second;
    }
    for (Value t = upper - 1; t >= 0; --t) out.tail[static_cast<std::size_t>(t)] = suffix;
  }
  return out;
}

Rat exact_success_probability(const Policy& policy, const Instance& inst, Weight t, int target,
                              RankKind kind, bool collapse) {
  if (target <= 0) return Rat(1);
  const Instance work = collapse ? collapse_to_bernoulli(inst, t) : inst;
  Rat acc(0);
  for_each_outcome_report(policy, work, [&](const Realization& x, const Rat& prob, const RunReport& rep) {
    const int r = kind == RankKind::TRank ? trank(rep.selection, x, t)
                                          : mtrank(inst.inner(), rep.selection, x, t);
    if (r >= target) acc += prob;
  });
  return acc;
}

namespace {

double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

}  // namespace

void parallel_chunks(long long count, int jobs, const std::function<void(long long, long long)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    fn(0, count);
    return;
  }
  std::vector<std::thread> pool;
  const long long chunk = (count + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    const long long lo = j * chunk;
    const long long hi = std::min<long long>(count, lo + chunk);
    if (lo < hi) pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

MonteCarloEstimate monte_carlo_estimate(const Policy& policy, const Instance& inst, long long trials,
                                        std::uint64_t seed, int jobs) {
  if (trials < 1) throw Error("monte_carlo_estimate needs trials >= 1");
  std::vector<double> values(static_cast<std::size_t>(trials));
  parallel_chunks(trials, jobs, [&](long long lo, long long hi) {
    for (long long trial = lo; trial < hi; ++trial) {
      const Realization x = sample_realization(inst, seed, static_cast<std::uint64_t>(trial));
      values[static_cast<std::size_t>(trial)] =
          static_cast<double>(execute(policy, inst, x).objective_value);
    }
  });
  MonteCarloEstimate est;
  est.trials = trials;
  est.mean = pairwise_sum(values, 0, values.size()) / static_cast<double>(trials);
  double sq = 0;
  for (double v : values) sq += (v - est.mean) * (v - est.mean);
  const double variance = trials > 1 ? sq / static_cast<double>(trials - 1) : 0.0;
  est.half_width_95 = 1.959963984540054 * std::sqrt(variance / static_cast<double>(trials));
  return est;
}

}  // namespace probemin
