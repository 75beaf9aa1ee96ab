#include "qkdplan/network.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "qkdplan/errors.hpp"
#include "qkdplan/rng.hpp"

namespace qkdplan {

bool natural_less(const NodeId& a, const NodeId& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ia = i, jb = j;
      while (ia < a.size() && std::isdigit(static_cast<unsigned char>(a[ia]))) ++ia;
      while (jb < b.size() && std::isdigit(static_cast<unsigned char>(b[jb]))) ++jb;
      std::size_t sa = i, sb = j;
      while (sa < ia - 1 && a[sa] == '0') ++sa;  // strip leading zeros
      while (sb < jb - 1 && b[sb] == '0') ++sb;
      const std::size_t la = ia - sa, lb = jb - sb;
      if (la != lb) return la < lb;
      const int cmp = a.compare(sa, la, b, sb, lb);
      if (cmp != 0) return cmp < 0;
      // equal value: fewer leading zeros first, then continue
      if (ia - i != jb - j) return ia - i < jb - j;
      i = ia;
      j = jb;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return (a.size() - i) < (b.size() - j);
}

Edge make_edge(const NodeId& a, const NodeId& b) {
  if (natural_less(b, a)) return Edge{b, a};
  return Edge{a, b};
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || p != last)
    throw ValidationError("bad number '" + s + "' in " + what);
  return v;
}

}  // namespace

Network::Network(std::vector<Node> nodes, std::vector<EdgeRecord> edges,
                 std::vector<TrafficRecord> traffic)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("network has no nodes");
  std::sort(nodes_.begin(), nodes_.end(),
            [](const Node& a, const Node& b) { return natural_less(a.id, b.id); });
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id.empty()) throw ValidationError("empty node id");
    if (!index_.emplace(nodes_[i].id, static_cast<int>(i)).second)
      throw ValidationError("duplicate node id " + nodes_[i].id);
  }

  for (auto& rec : edges) {
    const NodeId a = rec.edge.u, b = rec.edge.v;
    if (!index_.count(a)) throw ValidationError("unknown node " + a + " in edge " + a + b);
    if (!index_.count(b)) throw ValidationError("unknown node " + b + " in edge " + a + b);
    if (a == b) throw ValidationError("self loop " + a + a);
    rec.edge = make_edge(a, b);
    if (rec.key_rate <= 0.0)
      throw ValidationError("nonpositive key rate " + rec.edge.u + rec.edge.v);
    if (!rate_.emplace(rec.edge, rec.key_rate).second)
      throw ValidationError("parallel edge " + rec.edge.u + rec.edge.v);
  }
  edges_ = std::move(edges);
  std::sort(edges_.begin(), edges_.end(),
            [](const EdgeRecord& a, const EdgeRecord& b) { return a.edge < b.edge; });

  for (auto& rec : traffic) {
    const NodeId a = rec.pair.u, b = rec.pair.v;
    if (!index_.count(a) || !index_.count(b))
      throw ValidationError("unknown node in traffic entry " + a + b);
    if (a == b) throw ValidationError("traffic self pair " + a + a);
    if (rec.demand < 0.0) throw ValidationError("negative demand " + a + b);
    const Edge key = make_edge(a, b);
    auto [it, fresh] = demand_.emplace(key, rec.demand);
    if (!fresh && it->second != rec.demand)
      throw ValidationError("asymmetric traffic " + key.u + key.v);
    rec.pair = key;
  }
  traffic_.clear();
  traffic_.reserve(demand_.size());
  for (const auto& [pair, dem] : demand_) traffic_.push_back({pair, dem});

  adjacency_.assign(nodes_.size(), {});
  for (const auto& rec : edges_) {
    adjacency_[index_[rec.edge.u]].push_back(index_[rec.edge.v]);
    adjacency_[index_[rec.edge.v]].push_back(index_[rec.edge.u]);
  }
  for (auto& nbrs : adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    max_degree_ = std::max(max_degree_, static_cast<int>(nbrs.size()));
  }

  // connectivity
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    for (int nb : adjacency_[cur])
      if (!seen[nb]) {
        seen[nb] = 1;
        stack.push_back(nb);
      }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (!seen[i])
      throw ValidationError("disconnected network (node " + nodes_[i].id +
                            " unreachable)");
}

bool Network::has_node(const NodeId& id) const { return index_.count(id) != 0; }

int Network::node_index(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw ValidationError("unknown node " + id);
  return it->second;
}

bool Network::has_edge(const NodeId& a, const NodeId& b) const {
  return rate_.count(make_edge(a, b)) != 0;
}

double Network::key_rate(const NodeId& a, const NodeId& b) const {
  auto it = rate_.find(make_edge(a, b));
  if (it == rate_.end()) throw ValidationError("unknown edge " + a + "-" + b);
  return it->second;
}

double Network::demand(const NodeId& a, const NodeId& b) const {
  auto it = demand_.find(make_edge(a, b));
  return it == demand_.end() ? 0.0 : it->second;
}

EdgeSet Network::edge_set() const {
  EdgeSet out;
  for (const auto& rec : edges_) out.insert(rec.edge);
  return out;
}

void validate_edge_set(const Network& net, const EdgeSet& subset) {
  for (const Edge& e : subset)
    if (!net.has_edge(e.u, e.v))
      throw ValidationError("edge " + e.name() + " not in network");
}

// ---------------------------------------------------------------------------
// JSON

Network network_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("json parse failure: ") + e.what());
  }
  std::vector<Network::Node> nodes;
  std::vector<Network::EdgeRecord> edges;
  std::vector<Network::TrafficRecord> traffic;
  try {
    for (const auto& n : doc.at("nodes")) {
      Network::Node node;
      node.id = n.at("id").get<std::string>();
      if (n.contains("x") && n.contains("y"))
        node.pos = {n.at("x").get<double>(), n.at("y").get<double>()};
      nodes.push_back(std::move(node));
    }
    for (const auto& e : doc.at("edges"))
      edges.push_back({Edge{e.at("u").get<std::string>(), e.at("v").get<std::string>()},
                       e.at("key_rate_kbps").get<double>()});
    if (doc.contains("traffic"))
      for (const auto& t : doc.at("traffic"))
        traffic.push_back({Edge{t.at("u").get<std::string>(), t.at("v").get<std::string>()},
                           t.at("demand_kbps").get<double>()});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad network json: ") + e.what());
  }
  return Network(std::move(nodes), std::move(edges), std::move(traffic));
}

std::string network_to_json_text(const Network& net) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : net.nodes()) {
    nlohmann::ordered_json j{{"id", n.id}};
    if (n.pos) {
      j["x"] = n.pos->first;
      j["y"] = n.pos->second;
    }
    doc["nodes"].push_back(std::move(j));
  }
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : net.edges())
    doc["edges"].push_back({{"u", e.edge.u}, {"v", e.edge.v}, {"key_rate_kbps", e.key_rate}});
  doc["traffic"] = nlohmann::ordered_json::array();
  for (const auto& t : net.traffic())
    doc["traffic"].push_back({{"u", t.pair.u}, {"v", t.pair.v}, {"demand_kbps", t.demand}});
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct CsvSections {
  std::vector<std::vector<std::string>> nodes, edges, traffic;
};

CsvSections parse_csv_sections(const std::string& text) {
  CsvSections out;
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>>* current = nullptr;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) {
      current = nullptr;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields[0] == "id" && fields.size() >= 1 && current == nullptr) {
      current = &out.nodes;
      continue;
    }
    if (fields.size() >= 3 && fields[0] == "u" && fields[1] == "v") {
      current = fields[2] == "demand_kbps" ? &out.traffic : &out.edges;
      continue;
    }
    if (current == nullptr) throw ValidationError("csv line outside any section: " + line);
    current->push_back(std::move(fields));
  }
  return out;
}

Network network_from_csv_sections(const CsvSections& sec) {
  std::vector<Network::Node> nodes;
  std::vector<Network::EdgeRecord> edges;
  std::vector<Network::TrafficRecord> traffic;
  std::set<NodeId> node_ids;
  for (const auto& row : sec.nodes) {
    Network::Node n;
    n.id = row.at(0);
    if (row.size() >= 3 && !row[1].empty() && !row[2].empty())
      n.pos = {parse_double(row[1], "node x"), parse_double(row[2], "node y")};
    node_ids.insert(n.id);
    nodes.push_back(std::move(n));
  }
  for (const auto& row : sec.edges) {
    if (row.size() < 3) throw ValidationError("short edge row in csv");
    edges.push_back({Edge{row[0], row[1]}, parse_double(row[2], "key rate")});
    for (int k : {0, 1})
      if (!node_ids.count(row[k])) {
        node_ids.insert(row[k]);
        nodes.push_back({row[k], std::nullopt});
      }
  }
  for (const auto& row : sec.traffic) {
    if (row.size() < 3) throw ValidationError("short traffic row in csv");
    traffic.push_back({Edge{row[0], row[1]}, parse_double(row[2], "demand")});
  }
  return Network(std::move(nodes), std::move(edges), std::move(traffic));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sibling_path(const std::string& path, const std::string& tag) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + "." + tag + ".csv";
  return path.substr(0, dot) + "." + tag + path.substr(dot);
}

bool file_exists(const std::string& path) {
  std::ifstream in(path);
  return in.good();
}

}  // namespace

Network load_network(const std::string& path, NetworkFormat format) {
  const std::string text = read_file(path);
  if (format == NetworkFormat::json) return network_from_json_text(text);

  CsvSections sec = parse_csv_sections(text);
  if (sec.traffic.empty()) {
    const std::string tpath = sibling_path(path, "traffic");
    if (file_exists(tpath)) {
      CsvSections ts = parse_csv_sections(read_file(tpath));
      sec.traffic = ts.traffic.empty() ? ts.edges : ts.traffic;
    }
  }
  if (sec.nodes.empty()) {
    const std::string npath = sibling_path(path, "nodes");
    if (file_exists(npath)) sec.nodes = parse_csv_sections(read_file(npath)).nodes;
  }
  return network_from_csv_sections(sec);
}

// ---------------------------------------------------------------------------
// Export

std::string export_graph(const Network& net, const EdgeSet& subset,
                         ExportFormat format) {
  validate_edge_set(net, subset);
  std::ostringstream out;
  switch (format) {
    case ExportFormat::dot: {
      out << "graph qkd {\n";
      for (const auto& n : net.nodes()) {
        out << "  \"" << n.id << "\"";
        if (n.pos)
          out << " [pos=\"" << fmt_double(n.pos->first) << ","
              << fmt_double(n.pos->second) << "!\"]";
        out << ";\n";
      }
      for (const auto& e : net.edges()) {
        const bool on = subset.count(e.edge) != 0;
        out << "  \"" << e.edge.u << "\" -- \"" << e.edge.v << "\" [label=\""
            << fmt_double(e.key_rate) << "\", style=" << (on ? "solid" : "dashed")
            << "];\n";
      }
      out << "}\n";
      break;
    }
    case ExportFormat::graphml: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          << "  <key id=\"key_rate_kbps\" for=\"edge\" attr.name=\"key_rate_kbps\" attr.type=\"double\"/>\n"
          << "  <key id=\"selected\" for=\"edge\" attr.name=\"selected\" attr.type=\"boolean\"/>\n"
          << "  <graph id=\"qkd\" edgedefault=\"undirected\">\n";
      for (const auto& n : net.nodes()) out << "    <node id=\"" << n.id << "\"/>\n";
      for (const auto& e : net.edges()) {
        const bool on = subset.count(e.edge) != 0;
        out << "    <edge source=\"" << e.edge.u << "\" target=\"" << e.edge.v
            << "\">\n"
            << "      <data key=\"key_rate_kbps\">" << fmt_double(e.key_rate)
            << "</data>\n"
            << "      <data key=\"selected\">" << (on ? "true" : "false")
            << "</data>\n"
            << "    </edge>\n";
      }
      out << "  </graph>\n</graphml>\n";
      break;
    }
    case ExportFormat::csv: {
      out << "id,x,y\n";
      for (const auto& n : net.nodes()) {
        out << n.id << ",";
        if (n.pos)
          out << fmt_double(n.pos->first) << "," << fmt_double(n.pos->second);
        else
          out << ",";
        out << "\n";
      }
      out << "\nu,v,key_rate_kbps,selected\n";
      for (const auto& e : net.edges())
        out << e.edge.u << "," << e.edge.v << "," << fmt_double(e.key_rate) << ","
            << (subset.count(e.edge) ? 1 : 0) << "\n";
      out << "\nu,v,demand_kbps\n";
      for (const auto& t : net.traffic())
        out << t.pair.u << "," << t.pair.v << "," << fmt_double(t.demand) << "\n";
      break;
    }
    default:
      throw ValidationError("unknown export format");
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Reference network generator

Network reference_network(std::uint64_t seed) {
  constexpr int kNodes = 29;
  constexpr int kEdges = 48;
  constexpr int kHubDegree = 10;
  constexpr int kDegreeCap = 7;  // non-hub cap, keeps the hub strictly maximal
  const NodeId hub = "6";

  Rng rng(mix_seed(seed, "reference-network"));

  std::vector<NodeId> others;
  for (int i = 0; i < kNodes; ++i) {
    NodeId id = std::to_string(i);
    if (id != hub) others.push_back(std::move(id));
  }
  for (std::size_t i = others.size(); i > 1; --i)
    std::swap(others[i - 1], others[rng.below(i)]);

  std::set<std::pair<NodeId, NodeId>> used;
  std::vector<Network::EdgeRecord> edges;
  std::map<NodeId, int> deg;
  // rates are banded by role: the backbone tree (hub spokes and branch
  // fibers) runs hot, the cross links between branches run cold
  auto add = [&](const NodeId& a, const NodeId& b, double lo, double hi) {
    const Edge e = make_edge(a, b);
    if (a == b || used.count({e.u, e.v})) return false;
    used.insert({e.u, e.v});
    const double rate = std::round(rng.range(lo, hi) * 1000.0) / 1000.0;
    edges.push_back({e, rate});
    ++deg[a];
    ++deg[b];
    return true;
  };

  // hub-rooted backbone: kHubDegree branches hanging off the hub
  std::vector<std::vector<NodeId>> branches(kHubDegree);
  for (std::size_t i = 0; i < others.size(); ++i)
    branches[i % kHubDegree].push_back(others[i]);
  for (const auto& branch : branches) {
    add(hub, branch.front(), 12.0, 20.0);
    for (std::size_t i = 0; i + 1 < branch.size(); ++i)
      add(branch[i], branch[i + 1], 12.0, 20.0);
  }

  // satellite ring: each branch tip linked to the next branch's tip
  for (int b = 0; b < kHubDegree; ++b)
    add(branches[b].back(), branches[(b + 1) % kHubDegree].back(), 1.0, 6.0);

  // random cross links between distinct branches
  int guard = 0;
  while (static_cast<int>(edges.size()) < kEdges && guard < 100000) {
    ++guard;
    const auto& ba = branches[rng.below(branches.size())];
    const auto& bb = branches[rng.below(branches.size())];
    if (&ba == &bb) continue;
    const NodeId& a = ba[rng.below(ba.size())];
    const NodeId& b = bb[rng.below(bb.size())];
    if (deg[a] >= kDegreeCap || deg[b] >= kDegreeCap) continue;
    add(a, b, 1.0, 6.0);
  }
  // deterministic fallback sweep, in case rejection sampling stalls
  for (const NodeId& a : others) {
    if (static_cast<int>(edges.size()) >= kEdges) break;
    for (const NodeId& b : others) {
      if (static_cast<int>(edges.size()) >= kEdges) break;
      if (deg[a] < kDegreeCap && deg[b] < kDegreeCap) add(a, b, 1.0, 6.0);
    }
  }

  std::sort(edges.begin(), edges.end(),
            [](const auto& a, const auto& b) { return a.edge < b.edge; });

  std::vector<Network::Node> nodes;
  for (int i = 0; i < kNodes; ++i) nodes.push_back({std::to_string(i), std::nullopt});

  constexpr double kUniformDemand = 0.1;  // kbit/s between every pair
  std::vector<Network::TrafficRecord> traffic;
  for (int i = 0; i < kNodes; ++i)
    for (int j = i + 1; j < kNodes; ++j)
      traffic.push_back({make_edge(std::to_string(i), std::to_string(j)), kUniformDemand});

  return Network(std::move(nodes), std::move(edges), std::move(traffic));
}

}  // namespace qkdplan
