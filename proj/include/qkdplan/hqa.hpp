#pragma once

#include <map>
#include <set>
#include <vector>

#include "qkdplan/cost_model.hpp"
#include "qkdplan/graph.hpp"
#include "qkdplan/network.hpp"
#include "qkdplan/plan.hpp"
#include "qkdplan/qubo.hpp"

namespace qkdplan {

// ---------------------------------------------------------------------------
// Per-root spanning QUBO

/// One-root QUBO: a node variable per network node and a path variable per
/// listed path from the root. Variable count is exactly
/// node_count + path_count.
struct NnQubo {
  QuboProblem qubo;
  NodeId root;
  std::vector<NodeId> node_order;  // variable i, i < node_count
  std::vector<Path> paths;         // variable node_count + k
  std::map<NodeId, std::vector<int>, NaturalLess> target_paths;
  std::vector<std::vector<int>> prefixes;  // representable proper prefixes

  int node_count() const { return static_cast<int>(node_order.size()); }
  int path_count() const { return static_cast<int>(paths.size()); }
  int node_var(int i) const { return i; }
  int path_var(int k) const { return node_count() + k; }
};

/// Root's paths in canonical order (targets ascending, then each pair's
/// deterministic list order), fallbacks included.
std::vector<Path> collect_root_paths(const PathTable& table, const NodeId& root);

/// costs.path_costs must align with `paths`; penalties are taken from the
/// table. Throws if some non-root node has no listed path.
NnQubo build_nn_qubo(const Network& net, const NodeId& root,
                     const std::vector<Path>& paths, const CostTable& costs);

struct NnConstraintReport {
  std::vector<NodeId> missing_nodes;       // node variable off
  std::vector<NodeId> path_count_mismatch; // selected paths != node bit
  std::vector<std::pair<int, int>> missing_prefixes;  // (path, prefix) index
  int total() const {
    return static_cast<int>(missing_nodes.size() + path_count_mismatch.size() +
                            missing_prefixes.size());
  }
};

struct NnDecoded {
  std::vector<int> selected;  // indices into NnQubo::paths
  NnConstraintReport report;
};

NnDecoded decode_nn(const NnQubo& q, const SolveResult& result);

/// Kruskal-style reconstruction: edges ordered by (frequency desc, key rate
/// desc, canonical), added unless they close a cycle, until all nodes are
/// connected. Throws if the frequency support does not span the network.
EdgeSet filter_build(const std::map<Edge, int>& freq, const Network& net);

/// Iterative per-root planner: solve one spanning QUBO per node (nearest to
/// `start` first), feed selected edges back through the discount, then
/// reconstruct a spanning edge set from the edge frequencies.
PlanSolution run_hqa(const Network& net, const NodeId& start, int max_len,
                     QuboSolver& solver, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Circle redundancy

/// Edge-disjoint out/return path pair through `node`; the union forms a
/// closed walk (cycle) covering every node on it.
struct Redundancy {
  NodeId node;
  Path out_path;  // node -> target
  Path in_path;   // target -> node
  EdgeSet cycle_edges;
  std::vector<NodeId> cycle_nodes;  // unique, canonical order

  const NodeId& target() const { return out_path.target(); }
  int total_length() const { return out_path.length() + in_path.length(); }
};

/// Per target, the maximum-total-length edge-disjoint pair of bounded
/// paths (ties to the circle with the largest total key rate); distinct
/// targets yielding the same cycle edge set are merged. May be empty.
std::vector<Redundancy> find_redundancies(const Network& net, const NodeId& node,
                                          const PathTable& table, int max_len);

/// Paths of a redundancy list in cost-table order: out0, in0, out1, in1, ...
std::vector<Path> redundancy_paths(const std::vector<Redundancy>& rds);

/// Redundancy-selection QUBO: one variable per redundancy, a redundancy
/// marker per node, one undirected and two directed variables per network
/// edge — exactly |RD| + |N| + 3|E| variables. Input-network edges are
/// pinned on. `costs` must be computed over redundancy_paths(rds) in
/// redundancy penalty mode.
struct RedundancyQubo {
  QuboProblem qubo;
  NodeId node;
  std::vector<Redundancy> rds;
  std::vector<NodeId> node_order;
  std::vector<Edge> edge_order;
  EdgeSet input_edges;
  std::vector<double> rd_costs;  // c_rd per redundancy
  double node_cost = 0.0;        // c_r

  int rd_count() const { return static_cast<int>(rds.size()); }
  int rd_var(int k) const { return k; }
  int r_var(int i) const { return rd_count() + i; }
  int y_var(int e) const {
    return rd_count() + static_cast<int>(node_order.size()) + e;
  }
  int x_var(int e, bool forward) const {
    return rd_count() + static_cast<int>(node_order.size()) +
           static_cast<int>(edge_order.size()) + 2 * e + (forward ? 0 : 1);
  }
};

RedundancyQubo build_redundancy_qubo(const Network& net, const NodeId& node,
                                     const std::vector<Redundancy>& rds,
                                     const EdgeSet& input_net,
                                     const CostTable& costs);

struct RedundancyConstraintReport {
  int rd_node_mismatch = 0;     // selected rd with an unset node marker
  int edge_direction = 0;       // y/x coupling broken
  int selection_count = 0;      // 1 iff not exactly one rd selected
  int rd_edge_mismatch = 0;     // selected rd with an unset cycle edge
  int input_unpinned = 0;       // input-network edge not kept
  int total() const {
    return rd_node_mismatch + edge_direction + selection_count +
           rd_edge_mismatch + input_unpinned;
  }
};

struct RedundancyDecoded {
  std::vector<int> selected;  // indices into rds
  RedundancyConstraintReport report;
};

RedundancyDecoded decode_redundancy(const RedundancyQubo& q,
                                    const SolveResult& result);

/// Workaround filter for bridges: nodes in the smaller side of a bridge may
/// only take redundancies touching the larger side.
struct RedundancyFilter {
  std::map<NodeId, std::vector<std::set<NodeId>>, NaturalLess> required;

  bool allows(const NodeId& node, const Redundancy& rd) const;
  bool empty() const { return required.empty(); }
  void merge(const RedundancyFilter& other);
};

RedundancyFilter bridge_workaround(const EdgeSet& solution,
                                   const std::vector<NodeId>& nodes,
                                   const EdgeSet& bridges);

/// Grows the input solution with one selected redundancy per uncovered node
/// (fewest candidates first) until bridge-free, restarting with workaround
/// filters when bridges survive a pass. Throws InfeasibleError with the
/// bridge list after max_rounds.
PlanSolution run_redundancy(const Network& net, const EdgeSet& input_net,
                            QuboSolver& solver, std::uint64_t seed,
                            int max_rounds = 10, int max_len = 6);

}  // namespace qkdplan
