#pragma once

#include <map>
#include <variant>
#include <vector>

#include "qkdplan/network.hpp"

namespace qkdplan {

/// Simple path as an ordered node sequence (length = edge count >= 1).
struct Path {
  std::vector<NodeId> nodes;

  int length() const { return static_cast<int>(nodes.size()) - 1; }
  const NodeId& source() const { return nodes.front(); }
  const NodeId& target() const { return nodes.back(); }
  std::vector<Edge> edges() const;
  EdgeSet edge_set() const;
  std::string name() const;  // "a-b-c"

  bool operator==(const Path& o) const { return nodes == o.nodes; }
  /// (length, numeric-aware lexicographic node sequence)
  bool operator<(const Path& o) const;
};

/// All simple paths of bounded length between node pairs, plus a
/// hop-shortest fallback for pairs with no bounded path. List order per
/// pair is deterministic: by length, then node sequence.
struct PathTable {
  struct Entry {
    std::vector<Path> paths;
    bool fallback = false;  // the single entry exceeds max_len
  };
  int max_len = 0;
  std::map<std::pair<NodeId, NodeId>, Entry, PairNaturalLess> pairs;

  const Entry& at(const NodeId& source, const NodeId& target) const;
};

enum class PathWeight { hop, inverse_key_rate };
enum class TreeWeight { inverse_key_rate, custom };

/// All simple paths from `source` with at most `max_len` edges, grouped by
/// terminal node, each group sorted by (length, node sequence).
std::map<NodeId, std::vector<Path>, NaturalLess> enumerate_paths(
    const Network& net, const NodeId& source, int max_len);

/// Bounded path lists for every ordered pair of `net`, with hop-shortest
/// fallbacks where no bounded path exists.
PathTable build_path_table(const Network& net, int max_len);

/// Minimal-weight path, ties broken by lexicographic node sequence.
Path shortest_path(const Network& net, const NodeId& u, const NodeId& v,
                   PathWeight weight);

/// Proper prefixes of p sharing p's source, shortest first.
std::vector<Path> prefix_subpaths(const Path& p);

/// Deterministic Kruskal; ties broken by canonical edge order. `costs` is
/// consulted only for TreeWeight::custom.
EdgeSet minimum_spanning_tree(const Network& net, TreeWeight weight,
                              const std::map<Edge, double>& costs = {});

/// Nodes incident to at least one edge of the set.
std::vector<NodeId> incident_nodes(const EdgeSet& edges);

bool is_connected(const EdgeSet& edges, const std::vector<NodeId>& nodes);

/// Edges whose removal disconnects the graph (lowlink DFS). Input must be
/// connected over its incident nodes.
EdgeSet find_bridges(const EdgeSet& edges);

/// Connected and bridge-free over the given node set.
bool is_two_edge_connected(const EdgeSet& edges, const std::vector<NodeId>& nodes);

}  // namespace qkdplan
