#pragma once

#include <cstdint>

#include "qkdplan/network.hpp"
#include "qkdplan/plan.hpp"
#include "qkdplan/rng.hpp"

namespace qkdplan {

/// Annealer operating directly on edge subsets of the network.
struct SaConfig {
  double t_start = 1000.0;
  double t_end = 0.0001;
  double alpha = 0.9;
  double beta = 0.04;        // stall bonus in the acceptance rule
  double qkd_weight = 100.0; // weight of the edge count in the energy
  bool redundancy_mode = false;
  int restarts = 20;
  std::uint64_t seed = 0;

  void validate() const;
};

/// e = r + qkd_weight * |candidate|, where r sums demand/key_rate over the
/// edges of each pair's hop-shortest path inside the candidate.
double sa_energy(const EdgeSet& candidate, const Network& net,
                 double qkd_weight);

/// Symmetric difference with a random edge subset (|subset| >= 2), redrawn
/// until the result is connected (and 2-edge-connected in redundancy mode).
/// Returns the unchanged candidate if no valid neighbor is found within the
/// attempt budget.
EdgeSet sa_neighbor(const EdgeSet& candidate, const Network& net, Rng& rng,
                    bool redundancy_mode);

/// min(1, exp((e - e_new + beta*w) / t)).
double sa_accept(double e, double e_new, int w, double t, double beta);

/// Full annealing run from the complete edge set; one proposal per
/// temperature level, best-seen candidate over all restarts.
PlanSolution run_sa(const Network& net, const SaConfig& config);

}  // namespace qkdplan
