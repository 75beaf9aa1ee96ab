#include "qkdplan/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <queue>
#include <sstream>

#include "qkdplan/errors.hpp"

namespace qkdplan {

double edge_improvement(const Network& net, const EdgeSet& sol) {
  if (net.edge_count() == 0) throw ValidationError("empty network");
  validate_edge_set(net, sol);
  const double total = static_cast<double>(net.edge_count());
  return round2(100.0 * (total - static_cast<double>(sol.size())) / total);
}

double min_key_rate(const Network& net, const EdgeSet& sol) {
  if (sol.empty()) throw ValidationError("empty solution");
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : sol) best = std::min(best, net.key_rate(e));
  return best;
}

namespace {

struct SolutionGraph {
  const Network& net;
  std::vector<std::vector<int>> adjacency;  // index-based, canonical order

  SolutionGraph(const Network& n, const EdgeSet& sol) : net(n) {
    adjacency.assign(n.node_count(), {});
    for (const Edge& e : sol) {
      const int a = n.node_index(e.u), b = n.node_index(e.v);
      adjacency[a].push_back(b);
      adjacency[b].push_back(a);
    }
    for (auto& nbrs : adjacency) std::sort(nbrs.begin(), nbrs.end());
  }

  /// BFS hop distances from every node to `dst`.
  std::vector<int> distances_to(int dst) const {
    std::vector<int> dist(adjacency.size(), -1);
    std::queue<int> queue;
    dist[dst] = 0;
    queue.push(dst);
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop();
      for (int nb : adjacency[cur])
        if (dist[nb] < 0) {
          dist[nb] = dist[cur] + 1;
          queue.push(nb);
        }
    }
    return dist;
  }
};

}  // namespace

std::map<Edge, double> route_demands(const Network& net, const EdgeSet& sol) {
  validate_edge_set(net, sol);
  SolutionGraph g(net, sol);

  // hop distances to every destination that receives traffic
  std::map<int, std::vector<int>> dist_to;
  for (const auto& t : net.traffic()) {
    if (t.demand <= 0.0) continue;
    const int dst = net.node_index(t.pair.v);
    if (!dist_to.count(dst)) dist_to[dst] = g.distances_to(dst);
  }

  std::map<Edge, double> routed;
  for (const Edge& e : sol) routed[e] = 0.0;
  for (const auto& t : net.traffic()) {
    if (t.demand <= 0.0) continue;
    const int src = net.node_index(t.pair.u);
    const int dst = net.node_index(t.pair.v);
    const auto& dist = dist_to[dst];
    if (dist[src] < 0)
      throw ValidationError("solution does not connect " + t.pair.u + " and " +
                            t.pair.v);
    // lexicographically smallest hop-shortest path: always step to the
    // canonically first neighbor one hop closer to the destination
    int cur = src;
    while (cur != dst) {
      int next = -1;
      for (int nb : g.adjacency[cur])
        if (dist[nb] == dist[cur] - 1) {
          next = nb;
          break;
        }
      routed[make_edge(net.node_id(cur), net.node_id(next))] += t.demand;
      cur = next;
    }
  }
  return routed;
}

std::map<Edge, double> traffic_load(const Network& net, const EdgeSet& sol) {
  const auto routed = route_demands(net, sol);
  std::map<Edge, double> loads;
  for (const auto& [e, demand] : routed)
    loads[e] = 100.0 * demand / net.key_rate(e);
  return loads;
}

std::map<Edge, double> failure_load(const Network& net, const EdgeSet& sol) {
  std::vector<NodeId> all_nodes;
  for (const auto& n : net.nodes()) all_nodes.push_back(n.id);
  if (!is_two_edge_connected(sol, all_nodes))
    throw ValidationError("failure analysis requires a 2-edge-connected solution");

  std::map<Edge, double> worst;
  for (const Edge& e : sol) worst[e] = 0.0;
  for (const Edge& failed : sol) {
    EdgeSet degraded = sol;
    degraded.erase(failed);
    const auto loads = traffic_load(net, degraded);
    for (const auto& [e, load] : loads)
      worst[e] = std::max(worst[e], load);
  }
  return worst;
}

EvaluationReport evaluate_solution(const Network& net, const EdgeSet& sol,
                                   bool with_failure) {
  EvaluationReport report;
  report.edge_improvement_pct = edge_improvement(net, sol);
  report.min_key_rate = min_key_rate(net, sol);
  report.loads = traffic_load(net, sol);
  if (with_failure) {
    report.failure_loads = failure_load(net, sol);
    for (const auto& [e, load] : report.failure_loads)
      report.max_load_pct = std::max(report.max_load_pct, load);
  }
  return report;
}

namespace {

std::string fmt2(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf, buf + len);
}

std::string fmt_shortest(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

}  // namespace

nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["edge_improvement_pct"] = report.edge_improvement_pct;
  doc["min_key_rate_kbps"] = report.min_key_rate;
  doc["loads"] = nlohmann::ordered_json::array();
  for (const auto& [e, load] : report.loads)
    doc["loads"].push_back({{"u", e.u}, {"v", e.v}, {"load_pct", round2(load)}});
  if (!report.failure_loads.empty()) {
    doc["failure_loads"] = nlohmann::ordered_json::array();
    for (const auto& [e, load] : report.failure_loads)
      doc["failure_loads"].push_back(
          {{"u", e.u}, {"v", e.v}, {"worst_load_pct", round2(load)}});
    doc["max_load_pct"] = round2(report.max_load_pct);
  }
  return doc;
}

std::string report_to_csv(const EvaluationReport& report, const Network& net) {
  std::ostringstream out;
  out << "edge,key_rate_kbps,load_pct,worst_failure_load_pct\n";
  for (const auto& [e, load] : report.loads) {
    out << e.name() << "," << fmt_shortest(net.key_rate(e)) << "," << fmt2(load)
        << ",";
    auto it = report.failure_loads.find(e);
    if (it != report.failure_loads.end()) out << fmt2(it->second);
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Circle heuristic

namespace {

/// Tree path between two nodes of an EdgeSet that forms a tree/forest.
std::vector<NodeId> tree_path(const EdgeSet& tree, const NodeId& from,
                              const NodeId& to) {
  std::map<NodeId, std::vector<NodeId>> adjacency;
  for (const Edge& e : tree) {
    adjacency[e.u].push_back(e.v);
    adjacency[e.v].push_back(e.u);
  }
  std::map<NodeId, NodeId> parent;
  std::queue<NodeId> queue;
  parent[from] = from;
  queue.push(from);
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop();
    if (cur == to) break;
    for (const NodeId& nb : adjacency[cur])
      if (!parent.count(nb)) {
        parent[nb] = cur;
        queue.push(nb);
      }
  }
  std::vector<NodeId> path;
  NodeId cur = to;
  while (cur != from) {
    path.push_back(cur);
    cur = parent.at(cur);
  }
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

struct Circle {
  Edge chord;
  EdgeSet edges;
  double total_rate = 0.0;
  int size() const { return static_cast<int>(edges.size()); }
};

Circle fundamental_circle(const Network& net, const EdgeSet& mst, const Edge& chord) {
  Circle c;
  c.chord = chord;
  const auto path = tree_path(mst, chord.u, chord.v);
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    c.edges.insert(make_edge(path[i], path[i + 1]));
  c.edges.insert(chord);
  for (const Edge& e : c.edges) c.total_rate += net.key_rate(e);
  return c;
}

/// Biggest circle first, then largest total key rate, then chord order.
bool circle_better(const Circle& a, const Circle& b) {
  if (a.size() != b.size()) return a.size() > b.size();
  if (a.total_rate != b.total_rate) return a.total_rate > b.total_rate;
  return a.chord < b.chord;
}

}  // namespace

PlanSolution circle_heuristic(const Network& net, const NodeId& start) {
  net.node_index(start);  // validates
  const EdgeSet mst = minimum_spanning_tree(net, TreeWeight::inverse_key_rate);

  std::map<NodeId, int> mst_degree;
  for (const Edge& e : mst) {
    ++mst_degree[e.u];
    ++mst_degree[e.v];
  }
  std::vector<NodeId> satellites;
  for (const auto& n : net.nodes())
    if (mst_degree[n.id] == 1) satellites.push_back(n.id);

  std::vector<Edge> chords;
  for (const auto& rec : net.edges())
    if (!mst.count(rec.edge)) chords.push_back(rec.edge);

  EdgeSet result = mst;
  std::set<NodeId> covered;
  nlohmann::ordered_json added = nlohmann::ordered_json::array();

  auto apply = [&](const Circle& c) {
    for (const Edge& e : c.edges) {
      result.insert(e);
      covered.insert(e.u);
      covered.insert(e.v);
    }
    added.push_back({c.chord.u, c.chord.v});
  };

  for (const NodeId& leaf : satellites) {
    if (covered.count(leaf)) continue;
    bool found = false;
    Circle best;
    for (const Edge& chord : chords) {
      if (chord.u != leaf && chord.v != leaf) continue;
      Circle c = fundamental_circle(net, mst, chord);
      if (!found || circle_better(c, best)) {
        best = std::move(c);
        found = true;
      }
    }
    if (!found)
      throw InfeasibleError("no circle covers satellite node " + leaf);
    apply(best);
  }

  // close circles over any bridge that survived the satellite pass
  while (true) {
    const EdgeSet bridges = find_bridges(result);
    if (bridges.empty()) break;
    const Edge bridge = *bridges.begin();
    bool found = false;
    Circle best;
    for (const Edge& chord : chords) {
      if (result.count(chord)) continue;
      Circle c = fundamental_circle(net, mst, chord);
      if (!c.edges.count(bridge)) continue;
      if (!found || circle_better(c, best)) {
        best = std::move(c);
        found = true;
      }
    }
    if (!found)
      throw InfeasibleError("no circle covers bridge " + bridge.name());
    apply(best);
  }

  nlohmann::ordered_json provenance;
  provenance["method"] = "circle-heuristic";
  provenance["start"] = start;
  provenance["mst"] = nlohmann::ordered_json::array();
  for (const Edge& e : mst) provenance["mst"].push_back({e.u, e.v});
  provenance["satellites"] = satellites;
  provenance["added_chords"] = added;
  return make_plan_solution(net, std::move(result), std::move(provenance));
}

}  // namespace qkdplan
