#include "qkdplan/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "qkdplan/errors.hpp"

namespace qkdplan {

std::vector<Edge> Path::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    out.push_back(make_edge(nodes[i], nodes[i + 1]));
  return out;
}

EdgeSet Path::edge_set() const {
  EdgeSet out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    out.insert(make_edge(nodes[i], nodes[i + 1]));
  return out;
}

std::string Path::name() const {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += "-";
    out += nodes[i];
  }
  return out;
}

namespace {

bool sequence_less(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      natural_less);
}

}  // namespace

bool Path::operator<(const Path& o) const {
  if (nodes.size() != o.nodes.size()) return nodes.size() < o.nodes.size();
  return sequence_less(nodes, o.nodes);
}

const PathTable::Entry& PathTable::at(const NodeId& source,
                                      const NodeId& target) const {
  auto it = pairs.find({source, target});
  if (it == pairs.end())
    throw ValidationError("no path entry for " + source + "->" + target);
  return it->second;
}

std::map<NodeId, std::vector<Path>, NaturalLess> enumerate_paths(
    const Network& net, const NodeId& source, int max_len) {
  const int src = net.node_index(source);  // throws on unknown source
  const int n = static_cast<int>(net.node_count());
  std::map<NodeId, std::vector<Path>, NaturalLess> out;
  for (int i = 0; i < n; ++i)
    if (i != src) out[net.node_id(i)] = {};

  std::vector<char> on_path(n, 0);
  std::vector<int> stack{src};
  on_path[src] = 1;

  auto emit = [&]() {
    Path p;
    for (int idx : stack) p.nodes.push_back(net.node_id(idx));
    out[p.nodes.back()].push_back(std::move(p));
  };

  // iterative DFS over neighbor positions
  std::vector<std::size_t> cursor{0};
  while (!stack.empty()) {
    const int cur = stack.back();
    const auto& nbrs = net.neighbors(cur);
    if (cursor.back() < nbrs.size() &&
        static_cast<int>(stack.size()) - 1 < max_len) {
      const int next = nbrs[cursor.back()++];
      if (on_path[next]) continue;
      stack.push_back(next);
      cursor.push_back(0);
      on_path[next] = 1;
      emit();
    } else {
      on_path[cur] = 0;
      stack.pop_back();
      cursor.pop_back();
    }
  }

  for (auto& [target, list] : out) std::sort(list.begin(), list.end());
  return out;
}

Path shortest_path(const Network& net, const NodeId& u, const NodeId& v,
                   PathWeight weight) {
  if (u == v) throw ValidationError("shortest_path endpoints coincide: " + u);
  const int n = static_cast<int>(net.node_count());
  const int src = net.node_index(u), dst = net.node_index(v);

  auto edge_w = [&](int a, int b) {
    if (weight == PathWeight::hop) return 1.0;
    return 1.0 / net.key_rate(net.node_id(a), net.node_id(b));
  };

  // distances to dst, then a greedy lexicographic walk from src
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[dst] = 0.0;
  using QItem = std::pair<double, int>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
  queue.push({0.0, dst});
  while (!queue.empty()) {
    auto [d, cur] = queue.top();
    queue.pop();
    if (d > dist[cur]) continue;
    for (int nb : net.neighbors(cur)) {
      const double cand = d + edge_w(cur, nb);
      if (cand < dist[nb]) {
        dist[nb] = cand;
        queue.push({cand, nb});
      }
    }
  }

  Path p;
  int cur = src;
  p.nodes.push_back(net.node_id(cur));
  const double eps = 1e-12;
  while (cur != dst) {
    int chosen = -1;
    for (int nb : net.neighbors(cur)) {  // neighbors are in canonical order
      if (std::abs(edge_w(cur, nb) + dist[nb] - dist[cur]) <=
          eps * (1.0 + std::abs(dist[cur]))) {
        chosen = nb;
        break;
      }
    }
    if (chosen < 0) throw ValidationError("no path from " + u + " to " + v);
    cur = chosen;
    p.nodes.push_back(net.node_id(cur));
  }
  return p;
}

PathTable build_path_table(const Network& net, int max_len) {
  if (max_len < 1) throw ValidationError("max_len must be >= 1");
  PathTable table;
  table.max_len = max_len;
  for (const auto& src_node : net.nodes()) {
    auto grouped = enumerate_paths(net, src_node.id, max_len);
    for (auto& [target, list] : grouped) {
      PathTable::Entry entry;
      entry.paths = std::move(list);
      if (entry.paths.empty()) {
        entry.paths.push_back(shortest_path(net, src_node.id, target, PathWeight::hop));
        entry.fallback = true;
      }
      table.pairs[{src_node.id, target}] = std::move(entry);
    }
  }
  return table;
}

std::vector<Path> prefix_subpaths(const Path& p) {
  std::vector<Path> out;
  for (int len = 1; len < p.length(); ++len) {
    Path q;
    q.nodes.assign(p.nodes.begin(), p.nodes.begin() + len + 1);
    out.push_back(std::move(q));
  }
  return out;
}

EdgeSet minimum_spanning_tree(const Network& net, TreeWeight weight,
                              const std::map<Edge, double>& costs) {
  std::vector<std::pair<double, Edge>> order;
  for (const auto& rec : net.edges()) {
    double w;
    if (weight == TreeWeight::inverse_key_rate) {
      w = 1.0 / rec.key_rate;
    } else {
      auto it = costs.find(rec.edge);
      if (it == costs.end())
        throw ValidationError("missing custom cost for edge " + rec.edge.name());
      w = it->second;
    }
    order.push_back({w, rec.edge});
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });

  std::vector<int> parent(net.node_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  EdgeSet tree;
  for (const auto& [w, e] : order) {
    const int a = find(net.node_index(e.u)), b = find(net.node_index(e.v));
    if (a == b) continue;
    parent[a] = b;
    tree.insert(e);
    if (tree.size() + 1 == net.node_count()) break;
  }
  return tree;
}

std::vector<NodeId> incident_nodes(const EdgeSet& edges) {
  std::set<NodeId> seen;
  for (const Edge& e : edges) {
    seen.insert(e.u);
    seen.insert(e.v);
  }
  std::vector<NodeId> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), natural_less);
  return out;
}

namespace {

struct IndexedGraph {
  std::vector<NodeId> ids;                 // canonical order
  std::map<NodeId, int> index;
  std::vector<std::vector<int>> adjacency; // sorted neighbor indices

  explicit IndexedGraph(const EdgeSet& edges, const std::vector<NodeId>& nodes) {
    ids = nodes;
    std::sort(ids.begin(), ids.end(), natural_less);
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = static_cast<int>(i);
    adjacency.assign(ids.size(), {});
    for (const Edge& e : edges) {
      adjacency[index.at(e.u)].push_back(index.at(e.v));
      adjacency[index.at(e.v)].push_back(index.at(e.u));
    }
    for (auto& nbrs : adjacency) std::sort(nbrs.begin(), nbrs.end());
  }
};

}  // namespace

bool is_connected(const EdgeSet& edges, const std::vector<NodeId>& nodes) {
  if (nodes.empty()) return true;
  IndexedGraph g(edges, nodes);
  std::vector<char> seen(g.ids.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    for (int nb : g.adjacency[cur])
      if (!seen[nb]) {
        seen[nb] = 1;
        ++reached;
        stack.push_back(nb);
      }
  }
  return reached == g.ids.size();
}

EdgeSet find_bridges(const EdgeSet& edges) {
  const std::vector<NodeId> nodes = incident_nodes(edges);
  if (nodes.empty()) return {};
  if (!is_connected(edges, nodes))
    throw ValidationError("find_bridges requires a connected edge set");

  IndexedGraph g(edges, nodes);
  const int n = static_cast<int>(g.ids.size());
  std::vector<int> disc(n, -1), low(n, 0), parent(n, -1);
  EdgeSet bridges;
  int tick = 0;

  // iterative lowlink DFS
  std::vector<std::pair<int, std::size_t>> stack;
  stack.push_back({0, 0});
  disc[0] = low[0] = tick++;
  while (!stack.empty()) {
    const int cur = stack.back().first;
    std::size_t& cursor = stack.back().second;
    if (cursor < g.adjacency[cur].size()) {
      const int next = g.adjacency[cur][cursor++];
      if (disc[next] < 0) {
        parent[next] = cur;
        disc[next] = low[next] = tick++;
        stack.push_back({next, 0});
      } else if (next != parent[cur]) {
        low[cur] = std::min(low[cur], disc[next]);
      }
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        const int up = stack.back().first;
        low[up] = std::min(low[up], low[cur]);
        if (low[cur] > disc[up]) bridges.insert(make_edge(g.ids[up], g.ids[cur]));
      }
    }
  }
  return bridges;
}

bool is_two_edge_connected(const EdgeSet& edges, const std::vector<NodeId>& nodes) {
  if (nodes.size() <= 1) return true;
  if (!is_connected(edges, nodes)) return false;
  return find_bridges(edges).empty();
}

}  // namespace qkdplan
