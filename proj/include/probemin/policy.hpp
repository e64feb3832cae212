#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "probemin/model.hpp"
#include "probemin/objective.hpp"

namespace probemin {

// Policies see only revealed weights, never the underlying Realization; the
// executor owns the outcomes and feeds observations back one probe at a time.

struct Probe {
  ElementId id;
};
struct NextPhase {};  // starts a new feasible set in the ledger
struct Stop {};
using Action = std::variant<Probe, NextPhase, Stop>;

struct ThresholdCall {
  Value t = 0;
  bool success = false;
};

// Per adaptive-binary-search run: its calls, last failed threshold, and the
// upper bound max(objective, tau + 1) used by the 4x analysis.
struct MetaMinRunSummary {
  int target_index = 1;  // rank index i for sum-of-k children; 1 otherwise
  std::vector<ThresholdCall> calls;
  std::optional<Value> tau;
  Value ub = 0;
  Value objective = 0;
  IdSet selection = 0;
};

struct PhaseCost {
  Rat cost;
  std::vector<ElementId> elements;  // in probe order; may repeat earlier phases' ids
};

struct RunReport {
  IdSet selection = 0;
  Value objective_value = 0;
  std::optional<Value> ub_value;
  int feasible_set_count = 0;
  int probe_count = 0;  // distinct elements revealed
  std::vector<PhaseCost> cost_ledger;
  std::vector<ThresholdCall> call_log;
  std::vector<MetaMinRunSummary> metamin_runs;
};

// One execution of a policy; fresh per realization.
class PolicyRun {
 public:
  virtual ~PolicyRun() = default;
  virtual Action next() = 0;
  virtual void observe(ElementId e, Weight w) = 0;
  // Lets structured policies report call logs / upper bounds.
  virtual void finalize(RunReport&) const {}
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::unique_ptr<PolicyRun> start(const Instance& inst) const = 0;
  // Declared budget-augmentation bound; exceeding it is a hard failure.
  virtual int max_feasible_sets(const Instance&) const { return 1; }
};

// Non-adaptive policy probing fixed phases in order. Each phase must be
// feasible on its own.
std::unique_ptr<Policy> make_phased_policy(std::vector<std::vector<ElementId>> phases);
std::unique_ptr<Policy> make_set_policy(const std::vector<ElementId>& ids);

// Runs the policy against fixed outcomes. Hard failures (duplicate probe in
// a phase, infeasible phase, exceeded declared feasibility) throw
// std::logic_error: they indicate a broken policy, not a bad input.
RunReport execute(const Policy& policy, const Instance& inst, const Realization& x);

struct ExactEvaluation {
  Rat expectation;
  // Objective distribution, sorted by value.
  std::vector<std::pair<Value, Rat>> value_dist;
  // Dense tail[t] = P(f > t) for t = 0..bound; left empty when the value
  // bound exceeds 65536 (use tail_at instead).
  std::vector<Rat> tail;
  Rat tail_at(Value t) const;  // P(f > t)
};

// Exhaustive outcome enumeration: fn(x, prob, report) per profile.
void for_each_outcome_report(const Policy& policy, const Instance& inst,
                             const std::function<void(const Realization&, const Rat&, const RunReport&)>& fn);

// E[f(selection)] by enumeration, with the full tail vector. Verifies the
// tail-sum identity and the powers-of-two condensation sandwich on the way.
ExactEvaluation exact_expected_objective(const Policy& policy, const Instance& inst);

enum class RankKind { TRank, MTRank };

// P(rank(selection) >= target) by enumeration. With collapse = true, each
// distribution is first replaced by its two-point form at t; rank problems
// are invariant under this.
Rat exact_success_probability(const Policy& policy, const Instance& inst, Weight t, int target,
                              RankKind kind = RankKind::TRank, bool collapse = false);

struct MonteCarloEstimate {
  double mean = 0;
  double half_width_95 = 0;
  long long trials = 0;
};

// Deterministic given the seed; trials run on jobs threads with a fixed
// pairwise reduction order.
MonteCarloEstimate monte_carlo_estimate(const Policy& policy, const Instance& inst, long long trials,
                                        std::uint64_t seed, int jobs = 1);

// Static chunked parallel-for: fn(lo, hi) on up to `jobs` threads. Results
// keyed by index stay deterministic regardless of scheduling.
void parallel_chunks(long long count, int jobs, const std::function<void(long long, long long)>& fn);

}  // namespace probemin
