#pragma once

#include <string>

#include "probemin/policy.hpp"

namespace probemin {

// Stable-key JSON rendering of a run report; rationals serialize as "a/b"
// strings next to float renderings.
std::string report_to_json(const Instance& inst, const RunReport& report, int indent = 2);

// Fixed CSV schema for Monte Carlo trial tables:
//   schema,trial,objective,cost,feasible_set_count
std::string csv_header();
std::string csv_row(long long trial, const Instance& inst, const RunReport& report);

std::string rat_json(const Rat& q);  // "a/b"

}  // namespace probemin
