#include "probemin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "probemin/metamin.hpp"
#include "probemin/objective.hpp"
#include "probemin/oracle.hpp"
#include "probemin/policy.hpp"
#include "probemin/solvers.hpp"
#include "probemin/testgen.hpp"

namespace probemin {

namespace {

std::string rat_str(const Rat& q) { return to_fraction_string(q) + " (" + std::to_string(to_double(q)) + ")"; }

void add_check(SuiteResult& suite, const std::string& name, bool pass, const std::string& detail = "") {
  suite.checks.push_back({name, pass, detail});
}

SetObjective min_objective(int m) {
  return [m](IdSet s, const std::vector<Weight>& w) -> Value {
    Value best = m;
    for_each_id(s, [&](int e) { best = std::min<Value>(best, w[e]); });
    return best;
  };
}

SetObjective y_i_objective(int i, int m) {
  return [i, m](IdSet s, const std::vector<Weight>& w) -> Value {
    std::vector<Weight> vals;
    vals.reserve(set_size(s));
    for_each_id(s, [&](int e) { vals.push_back(w[e]); });
    if (static_cast<int>(vals.size()) < i) return m;
    std::nth_element(vals.begin(), vals.begin() + (i - 1), vals.end());
    return vals[i - 1];
  };
}

}  // namespace

SuiteResult verify_gap_example(const VerifyOptions& options) {
  SuiteResult suite{"gap-example", {}};
  std::vector<long long> ns{4, 10, 100};
  if (options.gap_n != 10 && std::find(ns.begin(), ns.end(), options.gap_n) == ns.end())
    ns.push_back(options.gap_n);
  for (long long N : ns) {
    const Instance inst = gap_instance(N);
    const auto policy = gap_adaptive_policy();
    const Rat adaptive = exact_expected_objective(*policy, inst).expectation;
    const Rat expected = gap_policy_expectation(N);
    const Rat oracle = opt_adaptive_expectation(inst).value;
    const auto nonadaptive = opt_nonadaptive_expectation(inst);
    const std::string tag = "N=" + std::to_string(N);
    add_check(suite, tag + " adaptive policy expectation is (2N^2-1)/N^3", adaptive == expected,
              rat_str(adaptive));
    add_check(suite, tag + " adaptive expectation <= 2/N", adaptive * Rat(N) <= 2,
              rat_str(adaptive));
    add_check(suite, tag + " best non-adaptive expectation = 1", nonadaptive.value == 1,
              rat_str(nonadaptive.value));
    add_check(suite, tag + " adaptivity-gap ratio >= N/2",
              nonadaptive.value * Rat(2) >= Rat(N) * adaptive,
              "ratio " + std::to_string(to_double(nonadaptive.value / adaptive)));
    add_check(suite, tag + " oracle adaptive optimum matches the policy", oracle == adaptive,
              rat_str(oracle));
    if (N == 10)
      add_check(suite, "N=10 adaptive expectation is exactly 199/1000", adaptive == Rat(199, 1000),
                rat_str(adaptive));
  }
  return suite;
}

SuiteResult verify_no_gap(const VerifyOptions& options) {
  SuiteResult suite{"no-gap", {}};
  const int count = options.instances > 0 ? options.instances : 200;
  TestRng rng(options.seed);
  KnapsackGenOptions gen;
  gen.max_n = 10;
  gen.max_m = 4;
  int gap_fail = 0, dom_fail = 0, feas_fail = 0;
  for (int trial = 0; trial < count; ++trial) {
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    const auto nonadaptive = opt_nonadaptive_threshold(inst, t);
    const Rat adaptive = opt_adaptive_rank_knapsack(inst, inst.constraint.budget, 1, t);
    if (nonadaptive.value + adaptive != 1) ++gap_fail;

    const GreedySelection greedy = density_greedy(inst, inst.constraint.budget, t);
    Rat greedy_fail(1);
    for (ElementId e : greedy.order) greedy_fail *= inst.above_prob(e, t);
    if (greedy_fail > nonadaptive.value) ++dom_fail;
    if (!greedy.order.empty()) {
      IdSet prefix = greedy.set() & ~id_bit(greedy.order.back());
      if (inst.cost_of(prefix) > inst.constraint.budget) ++feas_fail;
      if (inst.elements[greedy.order.back()].cost > inst.constraint.budget) ++feas_fail;
    }
  }
  add_check(suite, "threshold adaptivity gap = 1 on " + std::to_string(count) + " knapsack instances",
            gap_fail == 0, std::to_string(gap_fail) + " mismatches");
  add_check(suite, "density greedy beats the best strict non-adaptive set", dom_fail == 0,
            std::to_string(dom_fail) + " violations");
  add_check(suite, "density greedy minus its last element is budget-feasible", feas_fail == 0,
            std::to_string(feas_fail) + " violations");
  return suite;
}

SuiteResult verify_extgreedy_dominance(const VerifyOptions& options) {
  SuiteResult suite{"extgreedy-dominance", {}};
  const int count = options.instances > 0 ? options.instances : 100;
  TestRng rng(options.seed + 1);
  int fails = 0;
  int comparisons = 0;
  for (int trial = 0; trial < count; ++trial) {
    const int i = rng.uniform(1, 4);
    KnapsackGenOptions gen;
    gen.min_n = 3;
    gen.max_n = 12;
    gen.max_m = 4;
    gen.cost_divisor = i;  // every cost <= B / i
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    for (int target = 1; target <= i; ++target) {
      const GreedySelection g = ext_greedy(inst, inst.universe(), inst.constraint.budget, target, t);
      const Rat mine = set_rank_success(inst, g.set(), t, target);
      const Rat best = opt_adaptive_rank_knapsack(inst, inst.constraint.budget, target, t);
      ++comparisons;
      if (mine < best) ++fails;
    }
  }
  add_check(suite,
            "P(trank(G_l) >= l) >= adaptive optimum on the low-cost universe (" +
                std::to_string(comparisons) + " targets)",
            fails == 0, std::to_string(fails) + " violations");
  return suite;
}

namespace {

void bin_cost_checks(const Instance& inst, const Rat& budget, int i, Weight t, int& cost_fail,
                     int& level_fail) {
  const IdSet s = rank_knapsack_set(inst, budget, i, t);
  int z = 0;
  while ((1 << z) < i) ++z;  // ceil(log2 i)
  if (inst.cost_of(s) > budget * Rat(3 + 2 * z)) ++cost_fail;
  for (const IdSet level : bin(inst, budget, i, t).levels) {
    if (inst.cost_of(level) > budget * 2) ++level_fail;
  }
}

}  // namespace

SuiteResult verify_bin_value(const VerifyOptions& options) {
  SuiteResult suite{"bin-value", {}};
  const int count = options.instances > 0 ? options.instances : 100;
  TestRng rng(options.seed + 2);
  int value_fail = 0, cost_fail = 0, level_fail = 0;
  for (int trial = 0; trial < count; ++trial) {
    const int i = rng.uniform(1, 4);
    KnapsackGenOptions gen;
    gen.min_n = 3;
    gen.max_n = 12;
    gen.max_m = 4;
    gen.max_cost = 6;  // full cost range, including > B/i
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    const IdSet s = rank_knapsack_set(inst, inst.constraint.budget, i, t);
    const Rat mine = set_rank_success(inst, s, t, i);
    const Rat best = opt_adaptive_rank_knapsack(inst, inst.constraint.budget, i, t);
    if (mine < best) ++value_fail;
    bin_cost_checks(inst, inst.constraint.budget, i, t, cost_fail, level_fail);
  }
  add_check(suite, "P(trank(G u C) >= i) >= adaptive optimum on " + std::to_string(count) + " instances",
            value_fail == 0, std::to_string(value_fail) + " violations");
  add_check(suite, "cost(G u C) <= (3 + 2 ceil(log2 i)) B", cost_fail == 0,
            std::to_string(cost_fail) + " violations");
  add_check(suite, "every BIN level costs <= 2B", level_fail == 0,
            std::to_string(level_fail) + " violations");
  return suite;
}

SuiteResult verify_cost_bounds(const VerifyOptions& options) {
  SuiteResult suite{"cost-bounds", {}};
  const int count = options.instances > 0 ? options.instances : 500;
  TestRng rng(options.seed + 3);
  int cost_fail = 0, level_fail = 0;
  for (int trial = 0; trial < count; ++trial) {
    const int i = rng.uniform(1, 8);
    KnapsackGenOptions gen;
    gen.min_n = 2;
    gen.max_n = 16;
    gen.max_m = 4;
    gen.max_cost = 8;
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    bin_cost_checks(inst, inst.constraint.budget, i, t, cost_fail, level_fail);
  }
  add_check(suite, "cost(G u C) <= (3 + 2 ceil(log2 i)) B on " + std::to_string(count) + " instances",
            cost_fail == 0, std::to_string(cost_fail) + " violations");
  add_check(suite, "every BIN level costs <= 2B", level_fail == 0,
            std::to_string(level_fail) + " violations");
  return suite;
}

SuiteResult verify_nesting(const VerifyOptions& options) {
  SuiteResult suite{"nesting", {}};
  const int count = options.instances > 0 ? options.instances : 1000;
  TestRng rng(options.seed + 4);
  int fails = 0;
  int tested = 0;
  while (tested < count) {
    KnapsackGenOptions gen;
    gen.min_n = 2;
    gen.max_n = 10;
    gen.max_m = 4;
    gen.max_cost = 5;
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    const ElementId e = rng.uniform(0, inst.size() - 1);
    if (inst.elements[e].cost > inst.constraint.budget) continue;
    ++tested;
    const IdSet whole = ext_greedy(inst, inst.universe(), inst.constraint.budget, 0, t).set();
    const IdSet reduced = ext_greedy(inst, inst.universe() & ~id_bit(e),
                                     inst.constraint.budget - inst.elements[e].cost, 0, t)
                              .set();
    if ((reduced & ~whole) != 0) ++fails;
  }
  add_check(suite,
            "greedy(U - e, B - c_e) nests inside greedy(U, B) on " + std::to_string(count) + " draws",
            fails == 0, std::to_string(fails) + " violations");
  return suite;
}

SuiteResult verify_mgreedy_opt(const VerifyOptions& options) {
  SuiteResult suite{"mgreedy-opt", {}};
  const int count = options.instances > 0 ? options.instances : 100;
  TestRng rng(options.seed + 5);
  int fails = 0;
  int comparisons = 0;
  for (int trial = 0; trial < count; ++trial) {
    const auto [inst, t] = random_matroid_rank_instance(rng, 10, 4);
    const Matroid outer = inst.outer();
    const IdSet basis = ids_to_set(mgreedy(inst, outer, t));
    for (int i = 1; i <= outer.rank(); ++i) {
      const Rat mine = set_rank_success(inst, basis, t, i);
      const Rat best = opt_adaptive_rank_matroid(inst, outer, i, t);
      ++comparisons;
      if (mine != best) ++fails;
    }
  }
  add_check(suite,
            "matroid greedy equals the adaptive optimum for every rank target (" +
                std::to_string(comparisons) + " equalities)",
            fails == 0, std::to_string(fails) + " mismatches");
  return suite;
}

SuiteResult verify_adapmgreedy_opt(const VerifyOptions& options) {
  SuiteResult suite{"adapmgreedy-opt", {}};
  const int count = options.instances > 0 ? options.instances : 100;
  TestRng rng(options.seed + 6);
  int fails = 0, zero_fails = 0, comparisons = 0;
  for (int trial = 0; trial < count; ++trial) {
    const auto gen = random_minbasis_instance(rng, 7, 5);
    const Instance& inst = gen.instance;
    const Matroid inner = inst.inner();
    const auto policy = adap_mgreedy_policy(inst, inner, gen.budget, gen.t);
    for (int i = 1; i <= inst.k; ++i) {
      const Rat mine = exact_success_probability(*policy, inst, gen.t, i, RankKind::MTRank, true);
      const Rat best = opt_adaptive_mtrank_cardinality(inst, inner, gen.budget, i, gen.t);
      ++comparisons;
      if (mine != best) ++fails;
      if (gen.budget < i && (mine != 0 || best != 0)) ++zero_fails;
    }
  }
  add_check(suite,
            "adaptive matroid greedy equals the mtrank optimum for every target (" +
                std::to_string(comparisons) + " equalities)",
            fails == 0, std::to_string(fails) + " mismatches");
  add_check(suite, "success probability is 0 whenever the budget is below the target", zero_fails == 0,
            std::to_string(zero_fails) + " violations");
  return suite;
}

SuiteResult verify_metamin_4x(const VerifyOptions& options) {
  SuiteResult suite{"metamin-4x", {}};
  const int count = options.instances > 0 ? options.instances : 50;
  TestRng rng(options.seed + 7);
  const int ms[] = {3, 7, 15};
  int bound_fail = 0, interval_fail = 0, calls_fail = 0, prune_fail = 0;
  for (int trial = 0; trial < count; ++trial) {
    KnapsackGenOptions gen;
    gen.min_n = 2;
    gen.max_n = 6;
    gen.max_m = ms[rng.uniform(0, 2)];
    gen.max_support = 3;
    auto generated = random_knapsack_instance(rng, gen);
    Instance inst = generated.instance;
    inst.m = gen.max_m;  // the value bound is pinned to {3, 7, 15}
    inst.validate();
    const Instance& fixed = inst;

    auto cache = std::make_shared<std::map<Value, std::shared_ptr<const Policy>>>();
    ThresholdSolver solver = [&fixed, cache](Value t) {
      auto it = cache->find(t);
      if (it != cache->end()) return it->second;
      auto policy = optimal_min_element_threshold_policy(fixed, static_cast<Weight>(t));
      cache->emplace(t, policy);
      return policy;
    };
    const auto meta = make_metamin(solver, min_objective(inst.m), inst.m);

    Rat expected_ub(0);
    const int call_bound = metamin_call_bound(inst.m);
    for_each_outcome_report(*meta, inst, [&](const Realization&, const Rat& prob, const RunReport& rep) {
      const MetaMinRunSummary& run = rep.metamin_runs.at(0);
      expected_ub += prob * run.ub;
      if (static_cast<int>(run.calls.size()) > call_bound) ++calls_fail;
      if (!ub_interval_claim_holds(run, inst.m)) ++interval_fail;
      // Monotone pruning: no call may revisit a pruned side.
      Value lo = -1, hi = inst.m + 1;
      for (const auto& call : run.calls) {
        if (call.t <= lo || call.t >= hi) ++prune_fail;
        if (call.success) {
          hi = call.t;
        } else {
          lo = call.t;
        }
      }
    });
    const Rat opt = opt_adaptive_expectation(inst).value;
    if (expected_ub > 4 * opt) ++bound_fail;
  }
  add_check(suite, "E[UB] <= 4 E[adaptive OPT] with exact threshold solvers on " + std::to_string(count) +
                " instances",
            bound_fail == 0, std::to_string(bound_fail) + " violations");
  add_check(suite, "UB interval identity holds on every enumerated outcome", interval_fail == 0,
            std::to_string(interval_fail) + " violations");
  add_check(suite, "call count <= 1 + ceil(log2(floor(log2 m) + 2))", calls_fail == 0,
            std::to_string(calls_fail) + " violations");
  add_check(suite, "binary search never revisits a pruned threshold", prune_fail == 0,
            std::to_string(prune_fail) + " violations");
  return suite;
}

SuiteResult verify_sumk_8x(const VerifyOptions& options) {
  SuiteResult suite{"sumk-8x", {}};
  const int count = options.instances > 0 ? options.instances : 20;
  TestRng rng(options.seed + 8);
  int bound_fail = 0, runs_fail = 0;
  const int k = 2;
  for (int trial = 0; trial < count; ++trial) {
    KnapsackGenOptions gen;
    gen.min_n = 2;
    gen.max_n = 6;
    gen.max_m = 3;
    gen.max_support = 3;
    auto generated = random_knapsack_instance(rng, gen);
    Instance inst = generated.instance;
    inst.objective.kind = ObjectiveKind::MinK;
    inst.k = k;
    inst.m = 3;
    inst.validate();

    auto cache = std::make_shared<std::map<std::pair<int, Value>, std::shared_ptr<const Policy>>>();
    const Instance& fixed = inst;
    IndexedThresholdSolver family = [&fixed, cache](int index, Value t) {
      const auto key = std::make_pair(index, t);
      auto it = cache->find(key);
      if (it != cache->end()) return it->second;
      auto policy =
          optimal_rank_knapsack_policy(fixed, fixed.constraint.budget, index, static_cast<Weight>(t));
      cache->emplace(key, policy);
      return policy;
    };
    IndexedSetObjective objectives = [&fixed](int index) { return y_i_objective(index, fixed.m); };
    const auto policy = make_sum_of_k(family, objectives, k, inst.m);

    const int want_runs = 2;  // floor(log2 k) + 1
    bool runs_ok = true;
    for_each_outcome_report(*policy, inst, [&](const Realization&, const Rat&, const RunReport& rep) {
      if (static_cast<int>(rep.metamin_runs.size()) != want_runs) runs_ok = false;
    });
    if (!runs_ok) ++runs_fail;
    const Rat mine = exact_expected_objective(*policy, inst).expectation;
    const Rat opt = opt_adaptive_expectation(inst).value;
    if (mine > 8 * opt) ++bound_fail;
  }
  add_check(suite, "E[f(union)] <= 8 E[adaptive OPT] on " + std::to_string(count) + " min-k instances",
            bound_fail == 0, std::to_string(bound_fail) + " violations");
  add_check(suite, "one binary-search run per power-of-two index", runs_fail == 0,
            std::to_string(runs_fail) + " violations");
  return suite;
}

SuiteResult verify_decomposition(const VerifyOptions& options) {
  SuiteResult suite{"decomposition", {}};
  const int count = options.instances > 0 ? options.instances : 500;
  TestRng rng(options.seed + 9);
  int fails = 0;
  for (int trial = 0; trial < count; ++trial) {
    KnapsackGenOptions gen;
    gen.min_n = 2;
    gen.max_n = 8;
    gen.max_m = 4;
    const auto [inst, t] = random_knapsack_instance(rng, gen);
    std::vector<ElementId> ids;
    for (int e = 0; e < inst.size(); ++e) {
      if (rng.uniform(0, 1) == 1) ids.push_back(e);
    }
    if (ids.empty()) ids.push_back(rng.uniform(0, inst.size() - 1));
    const int target = rng.uniform(1, static_cast<int>(ids.size()));

    std::vector<std::vector<ElementId>> orderings;
    orderings.push_back(ids);
    orderings.push_back({ids.rbegin(), ids.rend()});
    std::vector<ElementId> shuffled = ids;
    for (std::size_t a = shuffled.size(); a > 1; --a)
      std::swap(shuffled[a - 1], shuffled[rng.uniform(0, static_cast<int>(a) - 1)]);
    orderings.push_back(shuffled);
    for (const auto& order : orderings) {
      if (decomposition_residual(inst, order, t, target) != 0) ++fails;
    }
  }
  add_check(suite,
            "rectangle decomposition reproduces P(trank >= l) for every ordering (" +
                std::to_string(3 * count) + " orderings)",
            fails == 0, std::to_string(fails) + " nonzero residuals");
  return suite;
}

SuiteResult verify_determinism(const VerifyOptions& options) {
  SuiteResult suite{"determinism", {}};
  const Instance inst = gap_instance(10);
  const auto policy = gap_adaptive_policy();
  const long long trials = 100000;

  const auto first = monte_carlo_estimate(*policy, inst, trials, options.seed, 1);
  const auto second = monte_carlo_estimate(*policy, inst, trials, options.seed, 1);
  const auto parallel = monte_carlo_estimate(*policy, inst, trials, options.seed, 4);
  add_check(suite, "identical seeds give bit-identical Monte Carlo estimates",
            first.mean == second.mean && first.half_width_95 == second.half_width_95,
            "mean " + std::to_string(first.mean));
  add_check(suite, "worker count does not change the estimate",
            first.mean == parallel.mean && first.half_width_95 == parallel.half_width_95);

  bool same = true;
  for (std::uint64_t trial = 0; trial < 32; ++trial) {
    if (sample_realization(inst, options.seed, trial).weights !=
        sample_realization(inst, options.seed, trial).weights)
      same = false;
  }
  add_check(suite, "sampling is a pure function of (seed, trial)", same);

  const double exact = 0.199;
  const double err = std::abs(first.mean - exact);
  add_check(suite, "Monte Carlo mean lands within 3 half-widths of the exact value 199/1000",
            err <= 3 * first.half_width_95,
            "mean " + std::to_string(first.mean) + ", half-width " + std::to_string(first.half_width_95));
  return suite;
}

std::vector<std::string> suite_names() {
  return {"no-gap",     "extgreedy-dominance", "bin-value",     "cost-bounds",
          "mgreedy-opt", "adapmgreedy-opt",     "metamin-4x",    "sumk-8x",
          "decomposition", "nesting",           "gap-example",   "determinism"};
}

SuiteResult run_suite(const std::string& name, const VerifyOptions& options) {
  if (name == "gap-example") return verify_gap_example(options);
  if (name == "no-gap") return verify_no_gap(options);
  if (name == "extgreedy-dominance") return verify_extgreedy_dominance(options);
  if (name == "bin-value") return verify_bin_value(options);
  if (name == "cost-bounds") return verify_cost_bounds(options);
  if (name == "nesting") return verify_nesting(options);
  if (name == "mgreedy-opt") return verify_mgreedy_opt(options);
  if (name == "adapmgreedy-opt") return verify_adapmgreedy_opt(options);
  if (name == "metamin-4x") return verify_metamin_4x(options);
  if (name == "sumk-8x") return verify_sumk_8x(options);
  if (name == "decomposition") return verify_decomposition(options);
  if (name == "determinism") return verify_determinism(options);
  throw Error("unknown verification suite '" + name + "'");
}

}  // namespace probemin
