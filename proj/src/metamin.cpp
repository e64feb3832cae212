#include "probemin/metamin.hpp"

#include <algorithm>

namespace probemin {

std::vector<Value> threshold_grid(Value value_bound) {
  if (value_bound < 1) throw Error("threshold grid needs a value bound >= 1");
  std::vector<Value> grid{0};
  for (Value p = 1; p <= value_bound; p *= 2) grid.push_back(p);
  return grid;
}

int metamin_call_bound(Value value_bound) {
  const int nonzero = static_cast<int>(threshold_grid(value_bound).size()) - 1;
  int calls = 0;
  while ((1 << calls) < nonzero + 1) ++calls;  // ceil(log2(nonzero + 1))
  return 1 + calls;
}

namespace {

// One adaptive-binary-search run. Drives sub-policy runs sequentially; the
// executor above sees a single flat stream of actions.
class MetaMinRun : public PolicyRun {
 public:
  MetaMinRun(const Instance& inst, const ThresholdSolver& solver, const SetObjective& objective,
             Value value_bound, const MetaMinOptions& options, int target_index = 1)
      : inst_(inst), solver_(solver), objective_(objective), options_(options) {
    summary_.target_index = target_index;
    weights_.assign(inst.size(), 0);
    grid_ = threshold_grid(value_bound);
    open_call(0);  // boundary case
  }

  Action next() override {
    while (true) {
      if (done_) return Stop{};
      if (!sub_run_) return Stop{};
      if (pending_phase_break_) {
        pending_phase_break_ = false;
        return NextPhase{};
      }
      const Action a = sub_run_->next();
      if (std::holds_alternative<Probe>(a)) {
        const ElementId e = std::get<Probe>(a).id;
        call_selection_ |= id_bit(e);
        summary_.selection |= id_bit(e);
        return a;
      }
      if (std::holds_alternative<NextPhase>(a)) return a;
      settle_call();
    }
  }

  void observe(ElementId e, Weight w) override {
    weights_[e] = w;
    sub_run_->observe(e, w);
  }

  void finalize(RunReport& report) const override {
    report.call_log.insert(report.call_log.end(), summary_.calls.begin(), summary_.calls.end());
    report.metamin_runs.push_back(summary_);
    report.ub_value = summary_.ub;
  }

  const MetaMinRunSummary& summary() const { return summary_; }
  bool done() const { return done_; }

 private:
  void open_call(Value t) {
    current_t_ = t;
    call_selection_ = 0;
    sub_policy_ = solver_(t);
    sub_run_ = sub_policy_->start(inst_);
    pending_phase_break_ = !first_call_;
    first_call_ = false;
  }

  // The sub-policy stopped: score the threshold test and pick the next
  // threshold by binary search on the surviving grid.
  void settle_call() {
    const IdSet tested = options_.test_on_union ? summary_.selection : call_selection_;
    const Value f_val = objective_(tested, weights_);
    const bool success = f_val <= current_t_;
    summary_.calls.push_back({current_t_, success});
    if (!success) summary_.tau = summary_.tau ? std::max(*summary_.tau, current_t_) : current_t_;

    if (success && current_t_ == 0) {
      finish();
      return;
    }
    // Prune: success removes every threshold >= t, failure every one <= t.
    std::vector<Value> survivors;
    for (Value v : grid_) {
      if (success ? v < current_t_ : v > current_t_) survivors.push_back(v);
    }
    grid_ = std::move(survivors);
    if (grid_.empty()) {
      finish();
      return;
    }
    open_call(grid_[(grid_.size() - 1) / 2]);  // lower median
  }

  void finish() {
    done_ = true;
    sub_run_.reset();
    sub_policy_.reset();
    summary_.objective = objective_(summary_.selection, weights_);
    summary_.ub = summary_.tau ? std::max(summary_.objective, *summary_.tau + 1) : summary_.objective;
  }

  const Instance& inst_;
  const ThresholdSolver& solver_;
  const SetObjective& objective_;
  MetaMinOptions options_;

  std::vector<Value> grid_;
  std::vector<Weight> weights_;
  std::shared_ptr<const Policy> sub_policy_;
  std::unique_ptr<PolicyRun> sub_run_;
  Value current_t_ = 0;
  IdSet call_selection_ = 0;
  bool pending_phase_break_ = false;
  bool first_call_ = true;
  bool done_ = false;
  MetaMinRunSummary summary_;
};

class MetaMinPolicy : public Policy {
 public:
  MetaMinPolicy(ThresholdSolver solver, SetObjective objective, Value value_bound, MetaMinOptions options)
      : solver_(std::move(solver)), objective_(std::move(objective)), value_bound_(value_bound),
        options_(options) {
    if (value_bound_ < 1) throw Error("metamin needs a value bound >= 1");
  }

  std::unique_ptr<PolicyRun> start(const Instance& inst) const override {
    return std::make_unique<MetaMinRun>(inst, solver_, objective_, value_bound_, options_);
  }

  int max_feasible_sets(const Instance&) const override {
    return metamin_call_bound(value_bound_) * options_.beta_per_call;
  }

 private:
  ThresholdSolver solver_;
  SetObjective objective_;
  Value value_bound_;
  MetaMinOptions options_;
};

// Runs one metamin child per index, hardest target first.
class SumOfKRun : public PolicyRun {
 public:
  SumOfKRun(const Instance& inst, const IndexedThresholdSolver& solver, const IndexedSetObjective& objective,
            const std::vector<int>& indices, int m, const MetaMinOptions& options)
      : inst_(inst), solver_(solver), objective_(objective), indices_(indices), m_(m), options_(options) {
    open_child(0);
  }

  Action next() override {
    while (true) {
      if (pos_ >= indices_.size()) return Stop{};
      if (pending_phase_break_) {
        pending_phase_break_ = false;
        return NextPhase{};
      }
      const Action a = child_->next();
      if (std::holds_alternative<Stop>(a)) {
        summaries_.push_back(child_->summary());
        ++pos_;
        if (pos_ >= indices_.size()) return Stop{};
        open_child(pos_);
        pending_phase_break_ = true;
        continue;
      }
      return a;
    }
  }

  void observe(ElementId e, Weight w) override { child_->observe(e, w); }

  void finalize(RunReport& report) const override {
    for (const auto& s : summaries_) {
      report.call_log.insert(report.call_log.end(), s.calls.begin(), s.calls.end());
      report.metamin_runs.push_back(s);
    }
  }

 private:
  void open_child(std::size_t pos) {
    const int index = indices_[pos];
    child_solver_ = [this, index](Value t) { return solver_(index, t); };
    child_objective_ = objective_(index);
    child_ = std::make_unique<MetaMinRun>(inst_, child_solver_, child_objective_, m_, options_, index);
  }

  const Instance& inst_;
  const IndexedThresholdSolver& solver_;
  const IndexedSetObjective& objective_;
  std::vector<int> indices_;
  int m_;
  MetaMinOptions options_;
  std::size_t pos_ = 0;
  ThresholdSolver child_solver_;
  SetObjective child_objective_;
  std::unique_ptr<MetaMinRun> child_;
  bool pending_phase_break_ = false;
  std::vector<MetaMinRunSummary> summaries_;
};

class SumOfKPolicy : public Policy {
 public:
  SumOfKPolicy(IndexedThresholdSolver solver, IndexedSetObjective objective, int k, int m,
               MetaMinOptions options)
      : solver_(std::move(solver)), objective_(std::move(objective)), m_(m), options_(options) {
    if (k < 1) throw Error("sum-of-k needs k >= 1");
    for (int i = 1; i <= k; i *= 2) indices_.push_back(i);
    std::reverse(indices_.begin(), indices_.end());  // hardest target first
  }

  std::unique_ptr<PolicyRun> start(const Instance& inst) const override {
    return std::make_unique<SumOfKRun>(inst, solver_, objective_, indices_, m_, options_);
  }

  int max_feasible_sets(const Instance&) const override {
    return static_cast<int>(indices_.size()) * metamin_call_bound(m_) * options_.beta_per_call;
  }

 private:
  IndexedThresholdSolver solver_;
  IndexedSetObjective objective_;
  std::vector<int> indices_;
  int m_;
  MetaMinOptions options_;
};

}  // namespace

std::unique_ptr<Policy> make_metamin(ThresholdSolver solver, SetObjective objective, Value value_bound,
                                     MetaMinOptions options) {
  return std::make_unique<MetaMinPolicy>(std::move(solver), std::move(objective), value_bound, options);
}

std::unique_ptr<Policy> make_sum_of_k(IndexedThresholdSolver solver, IndexedSetObjective objective, int k,
                                      int m, MetaMinOptions options) {
  return std::make_unique<SumOfKPolicy>(std::move(solver), std::move(objective), k, m, options);
}

bool ub_interval_claim_holds(const MetaMinRunSummary& run, Value value_bound) {
  // Largest failed and smallest succeeded thresholds, from the call log.
  std::optional<Value> t_fail;
  std::optional<Value> t_succ;
  for (const auto& call : run.calls) {
    if (call.success) {
      t_succ = t_succ ? std::min(*t_succ, call.t) : call.t;
    } else {
      t_fail = t_fail ? std::max(*t_fail, call.t) : call.t;
    }
  }
  if (!t_fail) return run.ub == 0;  // never failed: succeeded at 0 outright
  // Intervals: {0}, (0,1], (1,2], (2,4], ..., (2^L, m].
  const std::vector<Value> grid = threshold_grid(value_bound);
  const Value succ = t_succ.value_or(value_bound);  // no success: vacuous at m
  for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
    const Value a = grid[j];
    const Value b = grid[j + 1];
    const bool in_interval = run.ub > a && run.ub <= b;
    const bool fail_succ = *t_fail == a && succ == b;
    if (in_interval != fail_succ) return false;
  }
  const Value top = grid.back();
  if (top < value_bound) {
    const bool in_interval = run.ub > top && run.ub <= value_bound;
    const bool fail_succ = *t_fail == top && !t_succ;
    if (in_interval != fail_succ) return false;
  }
  return true;
}

}  // namespace probemin
