#include "probemin/report.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace probemin {

using ordered_json = nlohmann::ordered_json;

std::string rat_json(const Rat& q) { return to_fraction_string(q); }

namespace {

ordered_json summary_json(const MetaMinRunSummary& s) {
  ordered_json j;
  j["target_index"] = s.target_index;
  auto calls = ordered_json::array();
  for (const auto& c : s.calls) calls.push_back({{"t", c.t}, {"success", c.success}});
  j["calls"] = calls;
  if (s.tau) {
    j["tau"] = *s.tau;
  } else {
    j["tau"] = nullptr;
  }
  j["ub"] = s.ub;
  j["objective"] = s.objective;
  j["selection"] = set_to_ids(s.selection);
  return j;
}

}  // namespace

std::string report_to_json(const Instance& inst, const RunReport& report, int indent) {
  ordered_json j;
  j["selection"] = set_to_ids(report.selection);
  j["objective_value"] = report.objective_value;
  if (report.ub_value) j["ub_value"] = *report.ub_value;
  j["feasible_set_count"] = report.feasible_set_count;
  j["probe_count"] = report.probe_count;
  auto ledger = ordered_json::array();
  for (std::size_t p = 0; p < report.cost_ledger.size(); ++p) {
    const auto& phase = report.cost_ledger[p];
    ledger.push_back({{"phase", p},
                      {"cost", rat_json(phase.cost)},
                      {"cost_float", to_double(phase.cost)},
                      {"elements", phase.elements}});
  }
  j["cost_ledger"] = ledger;
  if (!report.call_log.empty()) {
    auto calls = ordered_json::array();
    for (const auto& c : report.call_log) calls.push_back({{"t", c.t}, {"success", c.success}});
    j["call_log"] = calls;
  }
  if (!report.metamin_runs.empty()) {
    auto runs = ordered_json::array();
    for (const auto& s : report.metamin_runs) runs.push_back(summary_json(s));
    j["metamin_runs"] = runs;
  }
  j["total_cost"] = rat_json(inst.cost_of(report.selection));
  return j.dump(indent);
}

std::string csv_header() {
  return "# schema: probemin.trials.v1\ntrial,objective,cost,feasible_set_count";
}

std::string csv_row(long long trial, const Instance& inst, const RunReport& report) {
  std::ostringstream out;
  out << trial << "," << report.objective_value << "," << rat_json(inst.cost_of(report.selection)) << ","
      << report.feasible_set_count;
  return out.str();
}

}  // namespace probemin
