#pragma once

#include <map>
#include <string>

#include "qkdplan/graph.hpp"
#include "qkdplan/network.hpp"
#include "qkdplan/plan.hpp"

namespace qkdplan {

/// Percentage of network edges the solution leaves unused.
double edge_improvement(const Network& net, const EdgeSet& sol);

/// Lowest key rate over the solution's edges (kbit/s).
double min_key_rate(const Network& net, const EdgeSet& sol);

/// Routes every demand on its hop-shortest path within `sol` (lexicographic
/// tie-break) and returns the raw key-rate demand placed on each edge.
std::map<Edge, double> route_demands(const Network& net, const EdgeSet& sol);

/// Per-edge load in percent: 100 * routed demand / key rate. `sol` must be
/// connected and span all nodes.
std::map<Edge, double> traffic_load(const Network& net, const EdgeSet& sol);

/// Worst-case load per edge when every other edge fails one at a time.
/// Requires a 2-edge-connected solution.
std::map<Edge, double> failure_load(const Network& net, const EdgeSet& sol);

struct EvaluationReport {
  double edge_improvement_pct = 0.0;
  double min_key_rate = 0.0;
  std::map<Edge, double> loads;          // percent
  std::map<Edge, double> failure_loads;  // percent, empty if not computed
  double max_load_pct = 0.0;             // max over failure_loads if present
};

EvaluationReport evaluate_solution(const Network& net, const EdgeSet& sol,
                                   bool with_failure);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);
/// "edge,key_rate_kbps,load_pct,worst_failure_load_pct" rows, two-decimal
/// percentages, canonical edge order.
std::string report_to_csv(const EvaluationReport& report, const Network& net);

/// Classical redundancy heuristic: inverse-key-rate MST, then the biggest
/// fundamental circle (ties by total key rate, then chord order) through
/// every uncovered MST leaf, then through any remaining bridge until the
/// result is bridge-free.
PlanSolution circle_heuristic(const Network& net, const NodeId& start);

}  // namespace qkdplan
