#include "qkdplan/hqa.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "qkdplan/errors.hpp"
#include "qkdplan/evaluation.hpp"
#include "qkdplan/rng.hpp"

namespace qkdplan {

// ---------------------------------------------------------------------------
// Per-root spanning QUBO

std::vector<Path> collect_root_paths(const PathTable& table, const NodeId& root) {
  std::vector<Path> out;
  for (const auto& [pair, entry] : table.pairs)
    if (pair.first == root)
      out.insert(out.end(), entry.paths.begin(), entry.paths.end());
  return out;
}

NnQubo build_nn_qubo(const Network& net, const NodeId& root,
                     const std::vector<Path>& paths, const CostTable& costs) {
  if (costs.path_costs.size() != paths.size())
    throw ValidationError("cost table does not match path list");
  NnQubo q;
  q.root = root;
  for (const auto& n : net.nodes()) q.node_order.push_back(n.id);
  q.paths = paths;

  for (const NodeId& id : q.node_order) q.qubo.add_variable("x:" + id);

  std::map<std::vector<NodeId>, int> by_sequence;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const Path& p = paths[k];
    if (p.source() != root)
      throw ValidationError("path " + p.name() + " does not start at root " + root);
    q.qubo.add_variable("p:" + p.name());
    q.target_paths[p.target()].push_back(static_cast<int>(k));
    by_sequence[p.nodes] = static_cast<int>(k);
  }
  for (const NodeId& id : q.node_order)
    if (id != root && !q.target_paths.count(id))
      throw ValidationError("unreachable node " + id + " from root " + root);

  q.prefixes.resize(paths.size());
  for (std::size_t k = 0; k < paths.size(); ++k)
    for (const Path& pre : prefix_subpaths(paths[k])) {
      auto it = by_sequence.find(pre.nodes);
      if (it != by_sequence.end()) q.prefixes[k].push_back(it->second);
    }

  const double a = costs.penalty_a, b = costs.penalty_b;

  // node occupation: sum (1 - x_n)^2 collapses to -x_n plus a constant
  for (int i = 0; i < q.node_count(); ++i) q.qubo.add(i, i, -a);

  // one path per target, tied to the target's node variable
  for (const auto& [target, group] : q.target_paths) {
    const int xt = q.node_var(net.node_index(target));
    q.qubo.add(xt, xt, a);
    for (std::size_t s = 0; s < group.size(); ++s) {
      const int pv = q.path_var(group[s]);
      q.qubo.add(xt, pv, -2.0 * a);
      q.qubo.add(pv, pv, a);
      for (std::size_t r = s + 1; r < group.size(); ++r)
        q.qubo.add(pv, q.path_var(group[r]), 2.0 * a);
    }
  }

  // selected paths force their representable prefixes
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const int pv = q.path_var(static_cast<int>(k));
    q.qubo.add(pv, pv, a * static_cast<double>(q.prefixes[k].size()));
    for (int pre : q.prefixes[k]) q.qubo.add(pv, q.path_var(pre), -a);
  }

  // path costs
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const int pv = q.path_var(static_cast<int>(k));
    q.qubo.add(pv, pv, b * costs.path_costs[k]);
  }
  return q;
}

NnDecoded decode_nn(const NnQubo& q, const SolveResult& result) {
  if (static_cast<int>(result.assignment.size()) != q.qubo.variable_count())
    throw ValidationError("assignment length mismatch");
  NnDecoded out;
  for (int k = 0; k < q.path_count(); ++k)
    if (result.assignment[q.path_var(k)]) out.selected.push_back(k);

  for (int i = 0; i < q.node_count(); ++i)
    if (!result.assignment[q.node_var(i)])
      out.report.missing_nodes.push_back(q.node_order[i]);

  for (const auto& [target, group] : q.target_paths) {
    int chosen = 0;
    for (int k : group)
      if (result.assignment[q.path_var(k)]) ++chosen;
    int xt = 0;
    for (int i = 0; i < q.node_count(); ++i)
      if (q.node_order[i] == target) xt = result.assignment[q.node_var(i)];
    if (chosen != xt) out.report.path_count_mismatch.push_back(target);
  }

  for (int k : out.selected)
    for (int pre : q.prefixes[k])
      if (!result.assignment[q.path_var(pre)])
        out.report.missing_prefixes.push_back({k, pre});
  return out;
}

EdgeSet filter_build(const std::map<Edge, int>& freq, const Network& net) {
  struct Item {
    Edge edge;
    int count;
    double rate;
  };
  std::vector<Item> order;
  for (const auto& [e, count] : freq) {
    if (count <= 0) continue;
    if (!net.has_edge(e.u, e.v))
      throw ValidationError("frequency edge " + e.name() + " not in network");
    order.push_back({e, count, net.key_rate(e)});
  }
  std::sort(order.begin(), order.end(), [](const Item& a, const Item& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.rate != b.rate) return a.rate > b.rate;
    return a.edge < b.edge;
  });

  std::vector<int> parent(net.node_count());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  EdgeSet built;
  std::size_t components = net.node_count();
  for (const Item& item : order) {
    if (components == 1) break;
    const int a = find(net.node_index(item.edge.u));
    const int b = find(net.node_index(item.edge.v));
    if (a == b) continue;  // would close a cycle
    parent[a] = b;
    built.insert(item.edge);
    --components;
  }
  if (components != 1)
    throw ValidationError("frequency support does not span the network");
  return built;
}

PlanSolution run_hqa(const Network& net, const NodeId& start, int max_len,
                     QuboSolver& solver, std::uint64_t seed) {
  const int start_idx = net.node_index(start);

  // hop distances from the start node define the processing order
  std::vector<int> dist(net.node_count(), -1);
  std::queue<int> queue;
  dist[start_idx] = 0;
  queue.push(start_idx);
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop();
    for (int nb : net.neighbors(cur))
      if (dist[nb] < 0) {
        dist[nb] = dist[cur] + 1;
        queue.push(nb);
      }
  }
  std::vector<NodeId> order;
  for (const auto& n : net.nodes()) order.push_back(n.id);
  std::stable_sort(order.begin(), order.end(), [&](const NodeId& a, const NodeId& b) {
    const int da = dist[net.node_index(a)], db = dist[net.node_index(b)];
    if (da != db) return da < db;
    return natural_less(a, b);
  });

  const PathTable table = build_path_table(net, max_len);
  DiscountState discount;
  nlohmann::ordered_json iterations = nlohmann::ordered_json::array();

  for (std::size_t iter = 0; iter < order.size(); ++iter) {
    const NodeId& root = order[iter];
    const std::vector<Path> paths = collect_root_paths(table, root);
    const CostTable costs = compute_cost_table(paths, net, discount, PenaltyMode::nn);
    const NnQubo q = build_nn_qubo(net, root, paths, costs);

    SolveResult res;
    try {
      res = solver.solve(q.qubo, mix_seed(seed, "planner", iter));
    } catch (const SolverError& e) {
      throw SolverError("iteration " + std::to_string(iter) + " (root " + root +
                        "): " + e.what());
    }
    const NnDecoded dec = decode_nn(q, res);

    EdgeSet used;
    nlohmann::ordered_json selected = nlohmann::ordered_json::array();
    for (int k : dec.selected) {
      for (const Edge& e : q.paths[k].edge_set()) used.insert(e);
      selected.push_back(q.paths[k].name());
    }
    discount.record_iteration(used);

    iterations.push_back({{"root", root},
                          {"variables", q.qubo.variable_count()},
                          {"energy", res.energy},
                          {"selected_paths", std::move(selected)},
                          {"violations", dec.report.total()}});
  }

  const std::map<Edge, int>& freq = discount.counts();
  EdgeSet edges = filter_build(freq, net);

  nlohmann::ordered_json provenance;
  provenance["method"] = "hqa";
  provenance["seed"] = seed;
  provenance["start"] = start;
  provenance["max_len"] = max_len;
  provenance["solver"] = solver.name();
  provenance["iterations"] = std::move(iterations);
  provenance["edge_frequency"] = nlohmann::ordered_json::array();
  for (const auto& [e, count] : freq)
    provenance["edge_frequency"].push_back({e.u, e.v, std::to_string(count)});
  return make_plan_solution(net, std::move(edges), std::move(provenance));
}

// ---------------------------------------------------------------------------
// Circle redundancy

namespace {

std::vector<Edge> sorted_edges(const Path& p) {
  auto edges = p.edges();
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool edges_disjoint(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return false;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return true;
}

bool sequence_less(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      natural_less);
}

}  // namespace

std::vector<Redundancy> find_redundancies(const Network& net, const NodeId& node,
                                          const PathTable& table, int max_len) {
  std::vector<Redundancy> out;
  std::set<EdgeSet> seen_cycles;

  auto cycle_rate = [&](const std::vector<Edge>& a, const std::vector<Edge>& b) {
    double sum = 0.0;
    for (const Edge& e : a) sum += net.key_rate(e);
    for (const Edge& e : b) sum += net.key_rate(e);
    return sum;
  };

  for (const auto& [pair, entry_out] : table.pairs) {
    if (pair.first != node) continue;
    const NodeId& target = pair.second;
    auto it_in = table.pairs.find({target, node});
    if (it_in == table.pairs.end()) continue;

    // bounded paths only; fallbacks may exceed the length cap
    std::vector<const Path*> outs, ins;
    std::vector<std::vector<Edge>> out_edges, in_edges;
    for (const Path& p : entry_out.paths)
      if (p.length() <= max_len) {
        outs.push_back(&p);
        out_edges.push_back(sorted_edges(p));
      }
    for (const Path& p : it_in->second.paths)
      if (p.length() <= max_len) {
        ins.push_back(&p);
        in_edges.push_back(sorted_edges(p));
      }

    // longest total length wins; ties prefer the circle with the largest
    // key exchange capacity, then the smaller node sequences
    const Path* best_out = nullptr;
    const Path* best_in = nullptr;
    int best_total = -1;
    double best_rate = 0.0;
    for (std::size_t a = 0; a < outs.size(); ++a)
      for (std::size_t b = 0; b < ins.size(); ++b) {
        if (!edges_disjoint(out_edges[a], in_edges[b])) continue;
        const int total = outs[a]->length() + ins[b]->length();
        if (total < best_total) continue;
        const double rate = cycle_rate(out_edges[a], in_edges[b]);
        bool better = total > best_total;
        if (!better && total == best_total) {
          if (rate != best_rate) {
            better = rate > best_rate;
          } else if (sequence_less(outs[a]->nodes, best_out->nodes)) {
            better = true;
          } else if (outs[a]->nodes == best_out->nodes &&
                     sequence_less(ins[b]->nodes, best_in->nodes)) {
            better = true;
          }
        }
        if (better) {
          best_total = total;
          best_rate = rate;
          best_out = outs[a];
          best_in = ins[b];
        }
      }
    if (best_total < 0) continue;

    Redundancy rd;
    rd.node = node;
    rd.out_path = *best_out;
    rd.in_path = *best_in;
    rd.cycle_edges = rd.out_path.edge_set();
    for (const Edge& e : rd.in_path.edge_set()) rd.cycle_edges.insert(e);
    if (!seen_cycles.insert(rd.cycle_edges).second) continue;  // same circle
    std::set<NodeId, NaturalLess> nodes(rd.out_path.nodes.begin(),
                                        rd.out_path.nodes.end());
    nodes.insert(rd.in_path.nodes.begin(), rd.in_path.nodes.end());
    rd.cycle_nodes.assign(nodes.begin(), nodes.end());
    out.push_back(std::move(rd));
  }
  return out;
}

std::vector<Path> redundancy_paths(const std::vector<Redundancy>& rds) {
  std::vector<Path> out;
  out.reserve(rds.size() * 2);
  for (const Redundancy& rd : rds) {
    out.push_back(rd.out_path);
    out.push_back(rd.in_path);
  }
  return out;
}

RedundancyQubo build_redundancy_qubo(const Network& net, const NodeId& node,
                                     const std::vector<Redundancy>& rds,
                                     const EdgeSet& input_net,
                                     const CostTable& costs) {
  if (rds.empty()) throw ValidationError("no redundancies for node " + node);
  if (costs.path_costs.size() != rds.size() * 2)
    throw ValidationError("cost table does not match redundancy list");
  validate_edge_set(net, input_net);

  RedundancyQubo q;
  q.node = node;
  q.rds = rds;
  q.input_edges = input_net;
  for (const auto& n : net.nodes()) q.node_order.push_back(n.id);
  for (const auto& rec : net.edges()) q.edge_order.push_back(rec.edge);

  for (std::size_t k = 0; k < rds.size(); ++k)
    q.qubo.add_variable("rd:" + rds[k].out_path.name() + "|" + rds[k].in_path.name());
  for (const NodeId& id : q.node_order) q.qubo.add_variable("r:" + id);
  for (const Edge& e : q.edge_order) q.qubo.add_variable("y:" + e.name());
  for (const Edge& e : q.edge_order) {
    q.qubo.add_variable("x:" + e.u + ">" + e.v);
    q.qubo.add_variable("x:" + e.v + ">" + e.u);
  }

  q.rd_costs.reserve(rds.size());
  for (std::size_t k = 0; k < rds.size(); ++k)
    q.rd_costs.push_back(costs.path_costs[2 * k] + costs.path_costs[2 * k + 1]);
  const double max_rd_cost = *std::max_element(q.rd_costs.begin(), q.rd_costs.end());
  const auto [a, b] = penalty_factors(max_rd_cost, PenaltyMode::redundancy);
  q.node_cost = std::sqrt(*std::min_element(q.rd_costs.begin(), q.rd_costs.end()) /
                          std::pow(5.0 * static_cast<double>(net.node_count()), 6));

  std::map<Edge, int> edge_index;
  for (std::size_t e = 0; e < q.edge_order.size(); ++e)
    edge_index[q.edge_order[e]] = static_cast<int>(e);

  // selected redundancies force their node markers
  for (int k = 0; k < q.rd_count(); ++k) {
    q.qubo.add(q.rd_var(k), q.rd_var(k),
               a * static_cast<double>(q.rds[k].cycle_nodes.size()));
    for (const NodeId& id : q.rds[k].cycle_nodes)
      q.qubo.add(q.rd_var(k), q.r_var(net.node_index(id)), -a);
  }

  // undirected edges agree with exactly one direction
  for (std::size_t e = 0; e < q.edge_order.size(); ++e) {
    const int y = q.y_var(static_cast<int>(e));
    const int x1 = q.x_var(static_cast<int>(e), true);
    const int x2 = q.x_var(static_cast<int>(e), false);
    q.qubo.add(y, y, a);
    q.qubo.add(x1, x1, a);
    q.qubo.add(x2, x2, a);
    q.qubo.add(y, x1, -2.0 * a);
    q.qubo.add(y, x2, -2.0 * a);
    q.qubo.add(x1, x2, 2.0 * a);
  }

  // exactly one redundancy
  for (int k = 0; k < q.rd_count(); ++k) {
    q.qubo.add(q.rd_var(k), q.rd_var(k), -a);
    for (int l = k + 1; l < q.rd_count(); ++l)
      q.qubo.add(q.rd_var(k), q.rd_var(l), 2.0 * a);
  }

  // selected redundancies force their cycle edges
  for (int k = 0; k < q.rd_count(); ++k) {
    q.qubo.add(q.rd_var(k), q.rd_var(k),
               a * static_cast<double>(q.rds[k].cycle_edges.size()));
    for (const Edge& e : q.rds[k].cycle_edges)
      q.qubo.add(q.rd_var(k), q.y_var(edge_index.at(e)), -a);
  }

  // the input network stays in the solution
  for (const Edge& e : input_net)
    q.qubo.add(q.x_var(edge_index.at(e), true), q.x_var(edge_index.at(e), true), -a);

  // costs: directed edges, redundancies, redundancy node markers
  for (std::size_t e = 0; e < q.edge_order.size(); ++e) {
    const double c = costs.edge_costs.at(q.edge_order[e]);
    for (bool forward : {true, false}) {
      const int xv = q.x_var(static_cast<int>(e), forward);
      q.qubo.add(xv, xv, b * c);
    }
  }
  for (int k = 0; k < q.rd_count(); ++k)
    q.qubo.add(q.rd_var(k), q.rd_var(k), b * q.rd_costs[k]);
  for (std::size_t i = 0; i < q.node_order.size(); ++i)
    q.qubo.add(q.r_var(static_cast<int>(i)), q.r_var(static_cast<int>(i)),
               b * q.node_cost);
  return q;
}

RedundancyDecoded decode_redundancy(const RedundancyQubo& q,
                                    const SolveResult& result) {
  if (static_cast<int>(result.assignment.size()) != q.qubo.variable_count())
    throw ValidationError("assignment length mismatch");
  RedundancyDecoded out;
  const auto& x = result.assignment;
  for (int k = 0; k < q.rd_count(); ++k)
    if (x[q.rd_var(k)]) out.selected.push_back(k);

  if (out.selected.size() != 1) out.report.selection_count = 1;

  std::map<Edge, int> edge_index;
  for (std::size_t e = 0; e < q.edge_order.size(); ++e)
    edge_index[q.edge_order[e]] = static_cast<int>(e);
  std::map<NodeId, int> node_index;
  for (std::size_t i = 0; i < q.node_order.size(); ++i)
    node_index[q.node_order[i]] = static_cast<int>(i);

  for (int k : out.selected) {
    for (const NodeId& id : q.rds[k].cycle_nodes)
      if (!x[q.r_var(node_index.at(id))]) ++out.report.rd_node_mismatch;
    for (const Edge& e : q.rds[k].cycle_edges)
      if (!x[q.y_var(edge_index.at(e))]) ++out.report.rd_edge_mismatch;
  }

  for (std::size_t e = 0; e < q.edge_order.size(); ++e) {
    const int y = x[q.y_var(static_cast<int>(e))];
    const int sum = x[q.x_var(static_cast<int>(e), true)] +
                    x[q.x_var(static_cast<int>(e), false)];
    if (y != sum) ++out.report.edge_direction;
  }

  for (const Edge& e : q.input_edges)
    if (!x[q.x_var(edge_index.at(e), true)]) ++out.report.input_unpinned;
  return out;
}

bool RedundancyFilter::allows(const NodeId& node, const Redundancy& rd) const {
  auto it = required.find(node);
  if (it == required.end()) return true;
  for (const auto& contacts : it->second) {
    bool touched = false;
    for (const NodeId& id : rd.cycle_nodes)
      if (contacts.count(id)) {
        touched = true;
        break;
      }
    if (!touched) return false;
  }
  return true;
}

void RedundancyFilter::merge(const RedundancyFilter& other) {
  for (const auto& [node, sets] : other.required)
    for (const auto& s : sets) required[node].push_back(s);
}

RedundancyFilter bridge_workaround(const EdgeSet& solution,
                                   const std::vector<NodeId>& nodes,
                                   const EdgeSet& bridges) {
  if (bridges.empty()) return {};
  RedundancyFilter filter;
  for (const Edge& bridge : bridges) {
    EdgeSet cut = solution;
    cut.erase(bridge);

    std::map<NodeId, std::vector<NodeId>> adjacency;
    for (const Edge& e : cut) {
      adjacency[e.u].push_back(e.v);
      adjacency[e.v].push_back(e.u);
    }
    auto component_of = [&](const NodeId& origin) {
      std::set<NodeId> comp{origin};
      std::vector<NodeId> stack{origin};
      while (!stack.empty()) {
        const NodeId cur = stack.back();
        stack.pop_back();
        for (const NodeId& nb : adjacency[cur])
          if (comp.insert(nb).second) stack.push_back(nb);
      }
      return comp;
    };
    const std::set<NodeId> side_u = component_of(bridge.u);
    const std::set<NodeId> side_v = component_of(bridge.v);
    const bool u_smaller = side_u.size() <= side_v.size();
    const std::set<NodeId>& small = u_smaller ? side_u : side_v;
    const std::set<NodeId>& large = u_smaller ? side_v : side_u;

    const std::set<NodeId> large_copy(large.begin(), large.end());
    for (const NodeId& id : small) filter.required[id].push_back(large_copy);
  }
  (void)nodes;
  return filter;
}

PlanSolution run_redundancy(const Network& net, const EdgeSet& input_net,
                            QuboSolver& solver, std::uint64_t seed,
                            int max_rounds, int max_len) {
  validate_edge_set(net, input_net);
  std::vector<NodeId> all_nodes;
  for (const auto& n : net.nodes()) all_nodes.push_back(n.id);
  if (!is_connected(input_net, all_nodes))
    throw ValidationError("input network must be connected and spanning");

  const PathTable table = build_path_table(net, max_len);
  std::map<NodeId, std::vector<Redundancy>, NaturalLess> candidates;
  bool any_redundancy = false;
  for (const NodeId& id : all_nodes) {
    candidates[id] = find_redundancies(net, id, table, max_len);
    if (!candidates[id].empty()) any_redundancy = true;
  }

  std::vector<NodeId> order = all_nodes;
  std::stable_sort(order.begin(), order.end(), [&](const NodeId& a, const NodeId& b) {
    const std::size_t ca = candidates[a].size(), cb = candidates[b].size();
    if (ca != cb) return ca < cb;
    return natural_less(a, b);
  });

  RedundancyFilter filter;
  nlohmann::ordered_json rounds = nlohmann::ordered_json::array();
  EdgeSet bridges_left;

  for (int round = 0; round < max_rounds; ++round) {
    EdgeSet work = input_net;
    std::set<NodeId> covered;
    nlohmann::ordered_json iterations = nlohmann::ordered_json::array();
    std::uint64_t iter_counter = 0;

    for (const NodeId& node : order) {
      if (covered.count(node)) continue;
      std::vector<Redundancy> allowed;
      for (const Redundancy& rd : candidates[node])
        if (filter.allows(node, rd)) allowed.push_back(rd);
      if (allowed.empty()) continue;

      const std::vector<Path> paths = redundancy_paths(allowed);
      const CostTable costs =
          compute_cost_table(paths, net, DiscountState{}, PenaltyMode::redundancy);
      const RedundancyQubo q =
          build_redundancy_qubo(net, node, allowed, work, costs);

      SolveResult res;
      try {
        res = solver.solve(q.qubo, mix_seed(seed, "redundancy",
                                            (static_cast<std::uint64_t>(round) << 32) |
                                                iter_counter));
      } catch (const SolverError& e) {
        throw SolverError("redundancy round " + std::to_string(round) + " node " +
                          node + ": " + e.what());
      }
      ++iter_counter;
      const RedundancyDecoded dec = decode_redundancy(q, res);

      nlohmann::ordered_json picks = nlohmann::ordered_json::array();
      for (int k : dec.selected) {
        const Redundancy& rd = q.rds[k];
        for (const Edge& e : rd.cycle_edges) work.insert(e);
        for (const NodeId& id : rd.cycle_nodes) covered.insert(id);
        picks.push_back({{"out", rd.out_path.name()}, {"in", rd.in_path.name()}});
      }
      iterations.push_back({{"node", node},
                            {"variables", q.qubo.variable_count()},
                            {"energy", res.energy},
                            {"selected", std::move(picks)},
                            {"violations", dec.report.total()}});
    }

    const EdgeSet bridges = find_bridges(work);
    nlohmann::ordered_json bridge_list = nlohmann::ordered_json::array();
    for (const Edge& e : bridges) bridge_list.push_back({e.u, e.v});
    rounds.push_back({{"round", round},
                      {"iterations", std::move(iterations)},
                      {"bridges", std::move(bridge_list)}});

    if (bridges.empty()) {
      nlohmann::ordered_json provenance;
      provenance["method"] = "hqa-redundant";
      provenance["seed"] = seed;
      provenance["max_len"] = max_len;
      provenance["solver"] = solver.name();
      provenance["rounds"] = std::move(rounds);
      return make_plan_solution(net, std::move(work), std::move(provenance));
    }
    bridges_left = bridges;
    filter.merge(bridge_workaround(work, all_nodes, bridges));
  }

  std::ostringstream msg;
  if (!any_redundancy) msg << "no redundancy exists; ";
  msg << "bridges remain after " << max_rounds << " rounds:";
  for (const Edge& e : bridges_left) msg << " " << e.name();
  throw InfeasibleError(msg.str());
}

}  // namespace qkdplan
