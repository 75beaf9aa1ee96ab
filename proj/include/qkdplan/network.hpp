#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace qkdplan {

using NodeId = std::string;

/// Numeric-aware lexicographic order on node ids ("2" < "10" < "a").
/// All canonical orderings in the toolkit derive from this comparison.
bool natural_less(const NodeId& a, const NodeId& b);

struct NaturalLess {
  bool operator()(const NodeId& a, const NodeId& b) const {
    return natural_less(a, b);
  }
};

struct PairNaturalLess {
  bool operator()(const std::pair<NodeId, NodeId>& a,
                  const std::pair<NodeId, NodeId>& b) const {
    if (a.first != b.first) return natural_less(a.first, b.first);
    return natural_less(a.second, b.second);
  }
};

/// Undirected edge in canonical form (u < v under natural_less).
struct Edge {
  NodeId u, v;

  bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
  bool operator!=(const Edge& o) const { return !(*this == o); }
  bool operator<(const Edge& o) const {
    if (u != o.u) return natural_less(u, o.u);
    return natural_less(v, o.v);
  }
  std::string name() const { return u + "-" + v; }
};

Edge make_edge(const NodeId& a, const NodeId& b);

using EdgeSet = std::set<Edge>;

/// Immutable undirected capacitated graph: nodes, key-rate edges (kbit/s)
/// and a symmetric traffic demand matrix in the same units, so that
/// load = demand / key_rate is dimensionless. Safe to share across threads
/// once constructed.
class Network {
 public:
  struct Node {
    NodeId id;
    std::optional<std::pair<double, double>> pos;
    bool operator==(const Node& o) const { return id == o.id && pos == o.pos; }
  };
  struct EdgeRecord {
    Edge edge;
    double key_rate;  // kbit/s, > 0
    bool operator==(const EdgeRecord& o) const {
      return edge == o.edge && key_rate == o.key_rate;
    }
  };
  struct TrafficRecord {
    Edge pair;      // canonical unordered node pair (u != v)
    double demand;  // kbit/s of required key material, >= 0
    bool operator==(const TrafficRecord& o) const {
      return pair == o.pair && demand == o.demand;
    }
  };

  /// Validates and canonicalizes. Throws ValidationError naming the
  /// offending element (self loop, parallel edge, nonpositive key rate,
  /// asymmetric or negative traffic, unknown node, disconnected graph).
  Network(std::vector<Node> nodes, std::vector<EdgeRecord> edges,
          std::vector<TrafficRecord> traffic);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::vector<TrafficRecord>& traffic() const { return traffic_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_node(const NodeId& id) const;
  /// Index of a node in canonical order; throws ValidationError if unknown.
  int node_index(const NodeId& id) const;
  const NodeId& node_id(int index) const { return nodes_[index].id; }

  bool has_edge(const NodeId& a, const NodeId& b) const;
  double key_rate(const NodeId& a, const NodeId& b) const;
  double key_rate(const Edge& e) const { return key_rate(e.u, e.v); }

  /// Symmetric demand lookup; 0 for pairs without an entry.
  double demand(const NodeId& a, const NodeId& b) const;

  /// Neighbor indices, sorted by canonical node order.
  const std::vector<int>& neighbors(int node_index) const {
    return adjacency_[node_index];
  }
  int degree(int node_index) const {
    return static_cast<int>(adjacency_[node_index].size());
  }
  int max_degree() const { return max_degree_; }

  EdgeSet edge_set() const;

  bool operator==(const Network& o) const {
    return nodes_ == o.nodes_ && edges_ == o.edges_ && traffic_ == o.traffic_;
  }

 private:
  std::vector<Node> nodes_;            // sorted by natural_less on id
  std::vector<EdgeRecord> edges_;      // canonical, sorted
  std::vector<TrafficRecord> traffic_; // canonical, sorted
  std::map<NodeId, int> index_;
  std::map<Edge, double> rate_;
  std::map<Edge, double> demand_;
  std::vector<std::vector<int>> adjacency_;
  int max_degree_ = 0;
};

enum class NetworkFormat { json, csv_triple };
enum class ExportFormat { dot, graphml, csv };

/// Loads and validates a network file. For csv_triple the path names the
/// edge file; traffic (and optionally node coordinates) are read from
/// sibling files "<stem>.traffic.csv" / "<stem>.nodes.csv" unless the file
/// itself is a combined multi-section document as written by export_graph.
Network load_network(const std::string& path, NetworkFormat format);

/// Parses the JSON interchange form:
/// {"nodes":[{"id","x","y"}], "edges":[{"u","v","key_rate_kbps"}],
///  "traffic":[{"u","v","demand_kbps"}]}
Network network_from_json_text(const std::string& text);
std::string network_to_json_text(const Network& net);

/// Renders the network with `subset` highlighted (solid vs dashed in DOT
/// and GraphML, selected column in CSV). Output is byte-deterministic.
std::string export_graph(const Network& net, const EdgeSet& subset,
                         ExportFormat format);

/// Synthetic 29-node / 48-edge reference network: a ring of 28 nodes
/// around a degree-10 hub labelled "6", plus random chords. Key rates are
/// drawn deterministically from the seed in [1, 20] kbit/s; traffic is a
/// uniform symmetric demand between every node pair.
Network reference_network(std::uint64_t seed);

/// Throws ValidationError unless every edge of `subset` exists in `net`.
void validate_edge_set(const Network& net, const EdgeSet& subset);

}  // namespace qkdplan
