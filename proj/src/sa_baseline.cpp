#include "qkdplan/sa_baseline.hpp"

#include <algorithm>
#include <cmath>

#include "qkdplan/errors.hpp"
#include "qkdplan/evaluation.hpp"
#include "qkdplan/graph.hpp"

namespace qkdplan {

void SaConfig::validate() const {
  if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("alpha must be in (0,1)");
  if (t_end <= 0.0 || t_end >= t_start)
    throw ValidationError("schedule requires 0 < t_end < t_start");
  if (beta < 0.0) throw ValidationError("beta must be >= 0");
  if (restarts < 1) throw ValidationError("restarts must be positive");
}

double sa_energy(const EdgeSet& candidate, const Network& net,
                 double qkd_weight) {
  double r = 0.0;
  const auto routed = route_demands(net, candidate);  // throws if disconnected
  for (const auto& [e, demand] : routed) r += demand / net.key_rate(e);
  return r + qkd_weight * static_cast<double>(candidate.size());
}

namespace {

bool candidate_valid(const EdgeSet& candidate, const Network& net,
                     const std::vector<NodeId>& all_nodes, bool redundancy_mode) {
  (void)net;
  if (redundancy_mode) return is_two_edge_connected(candidate, all_nodes);
  return is_connected(candidate, all_nodes);
}

}  // namespace

EdgeSet sa_neighbor(const EdgeSet& candidate, const Network& net, Rng& rng,
                    bool redundancy_mode) {
  std::vector<NodeId> all_nodes;
  for (const auto& n : net.nodes()) all_nodes.push_back(n.id);
  std::vector<Edge> pool;
  for (const auto& rec : net.edges()) pool.push_back(rec.edge);

  constexpr int kMaxAttempts = 512;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    // small random flip sets: at least two edges, geometric tail
    std::size_t size = 2;
    while (size < pool.size() && rng.chance(0.35)) ++size;

    // partial Fisher-Yates draw of `size` distinct edges
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    EdgeSet next = candidate;
    for (std::size_t k = 0; k < size; ++k) {
      std::swap(idx[k], idx[k + rng.below(idx.size() - k)]);
      const Edge& e = pool[idx[k]];
      if (next.count(e)) next.erase(e);
      else next.insert(e);
    }
    if (candidate_valid(next, net, all_nodes, redundancy_mode)) return next;
  }
  return candidate;  // nothing valid found; caller sees a no-op proposal
}

double sa_accept(double e, double e_new, int w, double t, double beta) {
  if (t <= 0.0) throw ValidationError("temperature must be positive");
  return std::min(1.0, std::exp((e - e_new + beta * w) / t));
}

PlanSolution run_sa(const Network& net, const SaConfig& config) {
  config.validate();
  std::vector<NodeId> all_nodes;
  for (const auto& n : net.nodes()) all_nodes.push_back(n.id);
  const EdgeSet full = net.edge_set();
  if (config.redundancy_mode && !is_two_edge_connected(full, all_nodes))
    throw InfeasibleError(
        "redundancy mode requires a 2-edge-connected network; no feasible "
        "candidate exists");

  EdgeSet best;
  double best_energy = 0.0;
  int best_restart = -1;
  nlohmann::ordered_json restart_log = nlohmann::ordered_json::array();

  for (int restart = 0; restart < config.restarts; ++restart) {
    Rng rng(mix_seed(config.seed, "sa-baseline", static_cast<std::uint64_t>(restart)));
    EdgeSet candidate = full;
    double energy = sa_energy(candidate, net, config.qkd_weight);
    EdgeSet seen_best = candidate;
    double seen_best_energy = energy;
    int stall = 0;
    int accepted = 0, proposals = 0;

    for (double t = config.t_start; t > config.t_end; t *= config.alpha) {
      ++proposals;
      const EdgeSet neighbor = sa_neighbor(candidate, net, rng, config.redundancy_mode);
      const double neighbor_energy = sa_energy(neighbor, net, config.qkd_weight);
      const double p = sa_accept(energy, neighbor_energy, stall, t, config.beta);
      if (p >= 1.0 || rng.unit() < p) {
        candidate = neighbor;
        energy = neighbor_energy;
        stall = 0;
        ++accepted;
        if (energy < seen_best_energy) {
          seen_best_energy = energy;
          seen_best = candidate;
        }
      } else {
        ++stall;
      }
    }

    restart_log.push_back({{"restart", restart},
                           {"best_energy", seen_best_energy},
                           {"edges", seen_best.size()},
                           {"accepted", accepted},
                           {"proposals", proposals}});
    if (best_restart < 0 || seen_best_energy < best_energy) {
      best_restart = restart;
      best_energy = seen_best_energy;
      best = std::move(seen_best);
    }
  }

  nlohmann::ordered_json provenance;
  provenance["method"] = "sa-baseline";
  provenance["seed"] = config.seed;
  provenance["redundancy_mode"] = config.redundancy_mode;
  provenance["config"] = {{"t_start", config.t_start}, {"t_end", config.t_end},
                          {"alpha", config.alpha},     {"beta", config.beta},
                          {"qkd_weight", config.qkd_weight},
                          {"restarts", config.restarts}};
  provenance["best_energy"] = best_energy;
  provenance["best_restart"] = best_restart;
  provenance["restarts"] = std::move(restart_log);
  return make_plan_solution(net, std::move(best), std::move(provenance));
}

}  // namespace qkdplan
