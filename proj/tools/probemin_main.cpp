// probemin — stochastic probing minimization toolkit.
//
// Subcommands:
//   solve    run an algorithm on an instance (exact or Monte Carlo evaluation)
//   oracle   exact optimal adaptive value by backward induction
//   verify   run a verification suite against the oracles
//   gap      the three-element adaptivity-gap report
//   sweep    metamin call-count sweep over a parameter grid
//
// Exit codes: 0 ok, 1 verification failure, 2 usage/config error, 3 cap
// exceeded.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "probemin/metamin.hpp"
#include "probemin/objective.hpp"
#include "probemin/oracle.hpp"
#include "probemin/report.hpp"
#include "probemin/solvers.hpp"
#include "probemin/testgen.hpp"
#include "probemin/verify.hpp"

using namespace probemin;
using ordered_json = nlohmann::ordered_json;

namespace {

struct GlobalArgs {
  std::string instance_path;
  std::uint64_t seed = 1;
  int jobs = 1;
  long long mc_trials = 0;  // 0 = exact
  std::string out_path;
  std::string format = "json";
};

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_instance(buffer.str());
}

void emit(const GlobalArgs& args, const std::string& text) {
  if (args.out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(args.out_path);
  if (!out) throw ParseError("cannot open output file '" + args.out_path + "'");
  out << text << "\n";
}

SetObjective instance_objective_fn(const Instance& inst) {
  switch (inst.objective.kind) {
    case ObjectiveKind::MinElement:
      return [m = inst.m](IdSet s, const std::vector<Weight>& w) -> Value {
        Value best = m;
        for_each_id(s, [&](int e) { best = std::min<Value>(best, w[e]); });
        return best;
      };
    case ObjectiveKind::MinK:
      return [&inst](IdSet s, const std::vector<Weight>& w) -> Value {
        return f_mink(s, Realization{w}, inst.k, inst.m);
      };
    case ObjectiveKind::MinBasis:
      return [&inst](IdSet s, const std::vector<Weight>& w) -> Value {
        return f_minbasis(s, Realization{w}, inst.inner(), inst.m);
      };
  }
  throw Error("bad objective");
}

Instance knapsack_view(const Instance& inst, const std::string& algo);

// Threshold solvers for metamin, by name. "exact" uses the oracles.
ThresholdSolver make_inner_solver(const Instance& inst, const std::string& name, int index) {
  auto cache = std::make_shared<std::map<Value, std::shared_ptr<const Policy>>>();
  if (name == "density") {
    auto view = std::make_shared<const Instance>(knapsack_view(inst, name));
    return [&inst, view, cache](Value t) {
      auto it = cache->find(t);
      if (it != cache->end()) return it->second;
      const auto greedy = density_greedy(*view, view->constraint.budget, static_cast<Weight>(t));
      auto policy = std::shared_ptr<const Policy>(
          make_phased_policy(feasible_phases(inst, greedy.order)).release());
      cache->emplace(t, policy);
      return policy;
    };
  }
  if (name == "rank-knapsack") {
    auto view = std::make_shared<const Instance>(knapsack_view(inst, name));
    return [&inst, view, cache, index](Value t) {
      auto it = cache->find(t);
      if (it != cache->end()) return it->second;
      const IdSet s = rank_knapsack_set(*view, view->constraint.budget, index, static_cast<Weight>(t));
      auto policy =
          std::shared_ptr<const Policy>(make_phased_policy(feasible_phases(inst, set_to_ids(s))).release());
      cache->emplace(t, policy);
      return policy;
    };
  }
  if (name == "mgreedy") {
    return [&inst, cache](Value t) {
      auto it = cache->find(t);
      if (it != cache->end()) return it->second;
      auto policy = std::shared_ptr<const Policy>(
          make_set_policy(mgreedy(inst, inst.outer(), static_cast<Weight>(t))).release());
      cache->emplace(t, policy);
      return policy;
    };
  }
  if (name == "exact") {
    return [&inst, cache, index](Value t) {
      auto it = cache->find(t);
      if (it != cache->end()) return it->second;
      std::shared_ptr<const Policy> policy;
      if (inst.constraint.kind == ConstraintKind::Knapsack && index == 1 &&
          inst.objective.kind == ObjectiveKind::MinElement) {
        policy = optimal_min_element_threshold_policy(inst, static_cast<Weight>(t));
      } else if (inst.constraint.kind == ConstraintKind::Knapsack) {
        policy = optimal_rank_knapsack_policy(inst, inst.constraint.budget, index, static_cast<Weight>(t));
      } else if (inst.constraint.kind == ConstraintKind::Cardinality) {
        // Probes are counted, not priced: run the heads DP on a unit-cost copy.
        Instance unit = inst;
        for (Element& e : unit.elements) e.cost = Rat(1);
        policy = optimal_rank_knapsack_policy(unit, Rat(inst.constraint.cardinality), index,
                                              static_cast<Weight>(t));
      } else {
        // Matroid constraint: the matroid greedy basis is already optimal for
        // every rank target.
        policy = std::shared_ptr<const Policy>(
            make_set_policy(mgreedy(inst, inst.outer(), static_cast<Weight>(t))).release());
      }
      cache->emplace(t, policy);
      return policy;
    };
  }
  throw ParseError("unknown inner solver '" + name + "'");
}

// The budgeted solvers are written against knapsack instances; a cardinality
// constraint is the unit-cost special case.
Instance knapsack_view(const Instance& inst, const std::string& algo) {
  if (inst.constraint.kind == ConstraintKind::Knapsack) return inst;
  if (inst.constraint.kind == ConstraintKind::Cardinality) {
    Instance view = inst;
    for (Element& e : view.elements) e.cost = Rat(1);
    view.constraint.kind = ConstraintKind::Knapsack;
    view.constraint.budget = Rat(inst.constraint.cardinality);
    view.validate();
    return view;
  }
  throw ParseError("algorithm '" + algo + "' needs a knapsack or cardinality constraint");
}

std::unique_ptr<Policy> build_policy(const Instance& inst, const std::string& algo, Weight t, int index,
                                     const std::string& inner, bool adaptive_handoff, bool test_on_union) {
  if (algo == "density") {
    const Instance view = knapsack_view(inst, algo);
    return make_phased_policy(feasible_phases(inst, density_greedy(view, view.constraint.budget, t).order));
  }
  if (algo == "extgreedy") {
    const Instance view = knapsack_view(inst, algo);
    IdSet low = 0;
    for (const Element& e : view.elements) {
      if (e.cost * Rat(index) <= view.constraint.budget) low |= id_bit(e.id);
    }
    const auto g = ext_greedy(view, low, view.constraint.budget, index, t);
    return make_phased_policy(feasible_phases(inst, g.order));
  }
  if (algo == "bin") {
    const Instance view = knapsack_view(inst, algo);
    const auto c = bin(view, view.constraint.budget, index, t);
    return make_phased_policy(feasible_phases(inst, set_to_ids(c.all)));
  }
  if (algo == "rank-knapsack") {
    const Instance view = knapsack_view(inst, algo);
    if (adaptive_handoff) return rank_knapsack_adaptive_policy(view, view.constraint.budget, index, t);
    const IdSet s = rank_knapsack_set(view, view.constraint.budget, index, t);
    return make_phased_policy(feasible_phases(inst, set_to_ids(s)));
  }
  if (algo == "mgreedy") return make_set_policy(mgreedy(inst, inst.outer(), t));
  if (algo == "adap-mgreedy")
    return adap_mgreedy_policy(inst, inst.inner(), inst.constraint.cardinality, t);
  if (algo == "metamin") {
    MetaMinOptions options;
    options.test_on_union = test_on_union;
    options.beta_per_call = inner == "density" ? 2 : 1;
    if (inst.objective.kind == ObjectiveKind::MinElement) {
      return make_metamin(make_inner_solver(inst, inner, 1), instance_objective_fn(inst), inst.m, options);
    }
    // Composite objectives run the sum-of-k driver over per-index searches.
    auto solvers = std::make_shared<std::map<int, ThresholdSolver>>();
    const Instance* fixed = &inst;
    const std::string inner_name = inner;
    IndexedThresholdSolver family = [fixed, solvers, inner_name](int idx, Value t2) {
      auto it = solvers->find(idx);
      if (it == solvers->end())
        it = solvers->emplace(idx, make_inner_solver(*fixed, inner_name, idx)).first;
      return it->second(t2);
    };
    IndexedSetObjective objectives = [fixed](int idx) -> SetObjective {
      if (fixed->objective.kind == ObjectiveKind::MinK) {
        return [fixed, idx](IdSet s, const std::vector<Weight>& w) -> Value {
          return y_i(s, Realization{w}, idx, fixed->m);
        };
      }
      return [fixed, idx](IdSet s, const std::vector<Weight>& w) -> Value {
        return g_i(s, Realization{w}, fixed->inner(), idx, fixed->m);
      };
    };
    return make_sum_of_k(family, objectives, inst.k, inst.m, options);
  }
  throw ParseError("unknown algorithm '" + algo + "'");
}

int cmd_solve(const GlobalArgs& args, const std::string& algo, int t_flag, int index,
              const std::string& inner, bool adaptive_handoff, bool test_on_union) {
  if (args.format != "json" && args.format != "csv") throw ParseError("--format must be csv or json");
  const Instance inst = load_instance(args.instance_path);
  const Weight t = static_cast<Weight>(t_flag);
  const auto policy = build_policy(inst, algo, t, index, inner, adaptive_handoff, test_on_union);

  if (args.mc_trials > 0) {
    std::ostringstream out;
    out << csv_header() << "\n";
    // Rows fill in parallel but stream in trial order.
    std::vector<std::string> rows(static_cast<std::size_t>(args.mc_trials));
    parallel_chunks(args.mc_trials, args.jobs, [&](long long lo, long long hi) {
      for (long long trial = lo; trial < hi; ++trial) {
        const Realization x = sample_realization(inst, args.seed, static_cast<std::uint64_t>(trial));
        rows[static_cast<std::size_t>(trial)] = csv_row(trial, inst, execute(*policy, inst, x));
      }
    });
    for (const auto& row : rows) out << row << "\n";
    const auto estimate = monte_carlo_estimate(*policy, inst, args.mc_trials, args.seed, args.jobs);
    out << "# summary: mean=" << estimate.mean << " half_width_95=" << estimate.half_width_95
        << " trials=" << estimate.trials;
    emit(args, out.str());
    return 0;
  }

  ordered_json j;
  j["algo"] = algo;
  j["t"] = t;
  if (algo == "metamin") {
    const ExactEvaluation eval = exact_expected_objective(*policy, inst);
    j["expected_objective"] = rat_json(eval.expectation);
    j["expected_objective_float"] = to_double(eval.expectation);
    Rat expected_ub(0);
    int max_calls = 0;
    for_each_outcome_report(*policy, inst, [&](const Realization&, const Rat& prob, const RunReport& rep) {
      for (const auto& run : rep.metamin_runs) {
        expected_ub += prob * run.ub;
        max_calls = std::max(max_calls, static_cast<int>(run.calls.size()));
      }
    });
    j["expected_ub"] = rat_json(expected_ub);
    j["expected_ub_float"] = to_double(expected_ub);
    j["max_calls_per_run"] = max_calls;
    j["call_bound_per_run"] = metamin_call_bound(inst.m);
    // A representative trace on the modal outcome.
    Rat best_prob(0);
    Realization modal;
    for_each_realization(inst, [&](const Realization& x, const Rat& prob) {
      if (prob > best_prob) {
        best_prob = prob;
        modal = x;
      }
    });
    j["sample_run"] = ordered_json::parse(report_to_json(inst, execute(*policy, inst, modal)));
  } else {
    // Threshold algorithms: report the exact success probability at (t, i).
    const bool mt = algo == "adap-mgreedy";
    const Rat success = exact_success_probability(*policy, inst, t, index,
                                                  mt ? RankKind::MTRank : RankKind::TRank, true);
    j["i"] = index;
    j["success_probability"] = rat_json(success);
    j["success_probability_float"] = to_double(success);
    const Realization x = sample_realization(inst, args.seed, 0);
    j["sample_run"] = ordered_json::parse(report_to_json(inst, execute(*policy, inst, x)));
  }
  if (args.format == "csv") {
    // Flat single-row rendering for scripted sweeps.
    std::ostringstream header, row;
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (value.is_object() || value.is_array()) continue;
      header << (first ? "" : ",") << key;
      row << (first ? "" : ",") << (value.is_string() ? value.get<std::string>() : value.dump());
      first = false;
    }
    emit(args, header.str() + "\n" + row.str());
    return 0;
  }
  emit(args, j.dump(2));
  return 0;
}

int cmd_oracle(const GlobalArgs& args) {
  const Instance inst = load_instance(args.instance_path);
  const auto start = std::chrono::steady_clock::now();
  const OracleRun run = opt_adaptive_expectation(inst);
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
  ordered_json j;
  j["value"] = rat_json(run.value);
  j["value_float"] = to_double(run.value);
  j["states_visited"] = run.states_visited;
  j["elapsed_ms"] = elapsed.count();
  emit(args, j.dump(2));
  return 0;
}

int cmd_verify(const GlobalArgs& args, const std::string& suite_name, int instances, long long gap_n) {
  VerifyOptions options;
  options.seed = args.seed;
  options.instances = instances;
  options.gap_n = gap_n;
  options.jobs = args.jobs;
  std::vector<std::string> names;
  if (suite_name == "all") {
    names = suite_names();
  } else {
    names.push_back(suite_name);
  }
  bool all_pass = true;
  std::ostringstream out;
  for (const auto& name : names) {
    const SuiteResult result = run_suite(name, options);
    for (const auto& check : result.checks) {
      out << (check.pass ? "[PASS] " : "[FAIL] ") << result.suite << ": " << check.name;
      if (!check.detail.empty()) out << " — " << check.detail;
      out << "\n";
      all_pass = all_pass && check.pass;
    }
  }
  out << (all_pass ? "verification passed" : "verification FAILED");
  emit(args, out.str());
  return all_pass ? 0 : 1;
}

int cmd_gap(const GlobalArgs& args, long long N) {
  const Instance inst = gap_instance(N);
  const auto policy = gap_adaptive_policy();
  const Rat adaptive = exact_expected_objective(*policy, inst).expectation;
  const OracleRun oracle = opt_adaptive_expectation(inst);
  const auto nonadaptive = opt_nonadaptive_expectation(inst);
  ordered_json j;
  j["N"] = N;
  j["adaptive_policy_expectation"] = rat_json(adaptive);
  j["adaptive_policy_expectation_float"] = to_double(adaptive);
  j["oracle_adaptive_expectation"] = rat_json(oracle.value);
  j["best_nonadaptive_expectation"] = rat_json(nonadaptive.value);
  j["best_nonadaptive_set"] = set_to_ids(nonadaptive.argmin);
  j["gap_ratio_float"] = to_double(nonadaptive.value / adaptive);
  j["gap_lower_bound"] = to_double(Rat(N, 2));
  emit(args, j.dump(2));
  return 0;
}

int cmd_sweep(const GlobalArgs& args, const std::string& algo, const std::string& param) {
  if (algo != "metamin") throw ParseError("sweep supports --algo metamin");
  const auto eq = param.find('=');
  if (eq == std::string::npos || param.substr(0, eq) != "m")
    throw ParseError("sweep expects --param m=<v1,v2,...>");
  std::vector<int> ms;
  std::stringstream list(param.substr(eq + 1));
  std::string tok;
  while (std::getline(list, tok, ',')) ms.push_back(std::stoi(tok));
  if (ms.empty()) throw ParseError("empty sweep grid");
  for (const int m : ms) {
    if (m < 1) throw ParseError("sweep needs m >= 1");
  }

  std::ostringstream out;
  out << "# schema: probemin.sweep.v1\n";
  out << "m,grid_size,call_bound,max_calls,expected_calls\n";
  // Grid points run in parallel; rows stream in grid order.
  std::vector<std::string> rows(ms.size());
  parallel_chunks(static_cast<long long>(ms.size()), args.jobs, [&](long long lo, long long hi) {
    for (long long idx = lo; idx < hi; ++idx) {
      const int m = ms[static_cast<std::size_t>(idx)];
      // A seeded five-element min-element knapsack instance per grid point,
      // with the value bound pinned to m.
      TestRng rng(args.seed + static_cast<std::uint64_t>(m) * 7919);
      KnapsackGenOptions gen;
      gen.min_n = 5;
      gen.max_n = 5;
      gen.max_m = m;
      gen.max_support = 3;
      Instance inst = random_knapsack_instance(rng, gen).instance;
      inst.m = m;
      inst.validate();
      auto cache = std::make_shared<std::map<Value, std::shared_ptr<const Policy>>>();
      const Instance* fixed = &inst;
      ThresholdSolver solver = [fixed, cache](Value t) {
        auto it = cache->find(t);
        if (it != cache->end()) return it->second;
        auto policy = optimal_min_element_threshold_policy(*fixed, static_cast<Weight>(t));
        cache->emplace(t, policy);
        return policy;
      };
      const auto meta = make_metamin(solver, instance_objective_fn(inst), inst.m);
      int max_calls = 0;
      Rat expected_calls(0);
      for_each_outcome_report(*meta, inst, [&](const Realization&, const Rat& prob, const RunReport& rep) {
        const int calls = static_cast<int>(rep.metamin_runs.at(0).calls.size());
        max_calls = std::max(max_calls, calls);
        expected_calls += prob * calls;
      });
      std::ostringstream row;
      row << inst.m << "," << threshold_grid(inst.m).size() << "," << metamin_call_bound(inst.m) << ","
          << max_calls << "," << to_double(expected_calls);
      rows[static_cast<std::size_t>(idx)] = row.str();
    }
  });
  for (const auto& row : rows) out << row << "\n";
  std::string text = out.str();
  text.pop_back();  // trailing newline
  emit(args, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic probing minimization toolkit"};
  app.require_subcommand(1);
  GlobalArgs args;
  app.add_option("--instance", args.instance_path, "instance JSON path");
  app.add_option("--seed", args.seed, "RNG seed");
  app.add_option("--jobs", args.jobs, "worker threads for Monte Carlo / sweeps");
  app.add_option("--out", args.out_path, "write output to a file instead of stdout");
  app.add_option("--format", args.format, "csv|json (chosen automatically by mode)");
  bool exact_flag = false;
  app.add_flag("--exact", exact_flag, "exact evaluation (default)");
  app.add_option("--mc", args.mc_trials, "Monte Carlo trials instead of exact evaluation");

  auto* solve = app.add_subcommand("solve", "run an algorithm");
  solve->fallthrough();
  std::string algo = "density";
  int t_flag = 0;
  int index = 1;
  std::string inner = "exact";
  bool adaptive_handoff = false;
  bool test_on_union = false;
  solve->add_option("--algo", algo, "density|extgreedy|bin|rank-knapsack|mgreedy|adap-mgreedy|metamin");
  solve->add_option("--t", t_flag, "threshold");
  solve->add_option("--i", index, "rank target");
  solve->add_option("--inner", inner, "metamin inner solver: density|rank-knapsack|mgreedy|exact");
  solve->add_flag("--adaptive-handoff", adaptive_handoff, "BIN-then-greedy adaptive variant");
  solve->add_flag("--test-on-union", test_on_union, "diagnostic: success test on the running union");

  auto* oracle = app.add_subcommand("oracle", "exact adaptive optimum");
  oracle->fallthrough();

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->fallthrough();
  std::string suite = "all";
  int instances = 0;
  long long verify_gap_n = 10;
  verify->add_option("suite", suite, "suite name or 'all'");
  verify->add_option("--n", instances, "override the instance count");
  verify->add_option("--N", verify_gap_n, "gap-example size");

  auto* gap = app.add_subcommand("gap", "adaptivity-gap report");
  gap->fallthrough();
  long long gap_n = 10;
  gap->add_option("--N", gap_n, "instance parameter N");

  auto* sweep = app.add_subcommand("sweep", "parameter sweep");
  sweep->fallthrough();
  std::string sweep_algo = "metamin";
  std::string sweep_param = "m=4,16,256";
  sweep->add_option("--algo", sweep_algo, "algorithm (metamin)");
  sweep->add_option("--param", sweep_param, "grid, e.g. m=4,16,256");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(args, algo, t_flag, index, inner, adaptive_handoff, test_on_union);
    if (oracle->parsed()) return cmd_oracle(args);
    if (verify->parsed()) return cmd_verify(args, suite, instances, verify_gap_n);
    if (gap->parsed()) return cmd_gap(args, gap_n);
    if (sweep->parsed()) return cmd_sweep(args, sweep_algo, sweep_param);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
