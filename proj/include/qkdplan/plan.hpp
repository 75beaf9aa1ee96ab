#pragma once

#include <string>

#include "json.hpp"

#include "qkdplan/network.hpp"

namespace qkdplan {

/// Rounds to two decimals, the reporting precision for percentages.
double round2(double v);

/// Planner output: the selected edge subset plus its headline metrics and
/// a method-specific provenance blob (per-iteration decodings, restart
/// summaries, edge frequencies, ...).
struct PlanSolution {
  EdgeSet edges;
  double edge_improvement_pct = 0.0;  // stored at reporting precision
  double min_key_rate = 0.0;          // kbit/s
  nlohmann::ordered_json provenance;
};

/// Fills in the metrics for an edge subset of `net`.
PlanSolution make_plan_solution(const Network& net, EdgeSet edges,
                                nlohmann::ordered_json provenance);

nlohmann::ordered_json plan_to_json(const PlanSolution& plan);
std::string plan_to_json_text(const PlanSolution& plan);
PlanSolution plan_from_json_text(const std::string& text);
PlanSolution load_plan(const std::string& path);

}  // namespace qkdplan
