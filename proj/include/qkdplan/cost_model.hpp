#pragma once

#include <map>
#include <vector>

#include "qkdplan/graph.hpp"
#include "qkdplan/network.hpp"

namespace qkdplan {

/// Per-edge selection counters feeding the discount. Counters only grow
/// while a planning run is in flight.
class DiscountState {
 public:
  int count(const Edge& e) const {
    auto it = counts_.find(e);
    return it == counts_.end() ? 0 : it->second;
  }
  /// +1 for every edge that occurred on any selected path this iteration.
  void record_iteration(const EdgeSet& used) {
    for (const Edge& e : used) ++counts_[e];
  }
  const std::map<Edge, int>& counts() const { return counts_; }

 private:
  std::map<Edge, int> counts_;
};

enum class PathClass { Worst, Worse, Good, Excellent };

const char* path_class_name(PathClass c);

enum class PenaltyMode { nn, redundancy };

/// 1 - 0.9^q, strictly increasing, in [0, 1).
double discount_factor(int q);

/// (1 - discount(q)) * max_degree * n_nodes / key_rate^2.
double edge_cost(double key_rate, int q, int max_degree, int n_nodes);

/// Bottleneck iff some later edge has a key rate strictly below the first
/// edge's; then len * max(edge costs), otherwise len * first-edge cost.
double path_cost_basic(const Path& p, const Network& net,
                       const std::map<Edge, double>& edge_costs);

/// Quartile split of the basic costs; boundary values fall to the better
/// class (<= Q1 Excellent, <= median Good, <= Q3 Worse, above Worst).
std::vector<PathClass> classify_paths(const std::vector<double>& basic_costs);

/// Divides the basic cost by {0.25, 0.5, 2, 4} * len for Worst, Worse,
/// Good, Excellent respectively.
double final_path_cost(double basic, PathClass cls, int len);

/// B = 0.5; A = B * ceil(2 * max_cost) + 1 in nn mode, without the +1 in
/// redundancy mode.
std::pair<double, double> penalty_factors(double max_cost, PenaltyMode mode);

/// Full cost structure for one planner iteration.
struct CostTable {
  std::map<Edge, double> edge_costs;
  std::vector<double> basic_costs;   // aligned with the instance's paths
  std::vector<PathClass> classes;
  std::vector<double> path_costs;    // final, classification applied
  double max_cost = 0.0;             // max of final path costs
  double penalty_a = 0.0;
  double penalty_b = 0.0;
};

CostTable compute_cost_table(const std::vector<Path>& paths, const Network& net,
                             const DiscountState& discount, PenaltyMode mode);

}  // namespace qkdplan
