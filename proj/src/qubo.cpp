#include "qkdplan/qubo.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <sstream>

#include "qkdplan/errors.hpp"
#include "qkdplan/rng.hpp"

namespace qkdplan {

QuboProblem::QuboProblem(std::vector<std::string> labels) {
  for (auto& l : labels) add_variable(l);
}

int QuboProblem::add_variable(const std::string& label) {
  const int idx = static_cast<int>(labels_.size());
  if (!label_index_.emplace(label, idx).second)
    throw ValidationError("duplicate qubo variable label " + label);
  labels_.push_back(label);
  return idx;
}

void QuboProblem::add(int i, int j, double c) {
  if (i < 0 || j < 0 || i >= variable_count() || j >= variable_count())
    throw ValidationError("qubo index out of range");
  if (c == 0.0) return;
  if (i > j) std::swap(i, j);
  coeff_[{i, j}] += c;
}

double QuboProblem::evaluate(const std::vector<std::uint8_t>& x) const {
  if (static_cast<int>(x.size()) != variable_count())
    throw ValidationError("assignment length mismatch");
  double e = 0.0;
  for (const auto& [ij, c] : coeff_)
    if (x[ij.first] && x[ij.second]) e += c;
  return e;
}

double evaluate(const QuboProblem& q, const std::vector<std::uint8_t>& x) {
  return q.evaluate(x);
}

std::string dump_qubo(const QuboProblem& q) {
  std::ostringstream out;
  out << "labels " << q.variable_count() << "\n";
  for (int i = 0; i < q.variable_count(); ++i)
    out << i << " " << q.labels()[i] << "\n";
  out << "terms " << q.coefficients().size() << "\n";
  for (const auto& [ij, c] : q.coefficients()) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, c);
    (void)ec;
    out << ij.first << " " << ij.second << " " << std::string_view(buf, p - buf)
        << "\n";
  }
  return out.str();
}

AnnealSchedule AnnealSchedule::defaults_for(int variable_count) {
  AnnealSchedule s;
  s.sweeps_per_temp = std::max(1, variable_count);
  return s;
}

void AnnealSchedule::validate() const {
  if (t_start <= 0 || t_end <= 0 || t_end >= t_start)
    throw ValidationError("anneal schedule requires 0 < t_end < t_start");
  if (alpha <= 0 || alpha >= 1) throw ValidationError("alpha must be in (0,1)");
  if (restarts < 1) throw ValidationError("restarts must be positive");
}

int cooling_steps(double t_start, double t_end, double alpha) {
  int steps = 0;
  for (double t = t_start; t > t_end; t *= alpha) ++steps;
  return steps;
}

namespace {

/// Adjacency view for O(degree) flip deltas.
struct QuboView {
  std::vector<double> diagonal;
  std::vector<std::vector<std::pair<int, double>>> couplings;

  explicit QuboView(const QuboProblem& q) {
    const int n = q.variable_count();
    diagonal.assign(n, 0.0);
    couplings.assign(n, {});
    for (const auto& [ij, c] : q.coefficients()) {
      if (ij.first == ij.second) {
        diagonal[ij.first] += c;
      } else {
        couplings[ij.first].push_back({ij.second, c});
        couplings[ij.second].push_back({ij.first, c});
      }
    }
  }

  double flip_delta(const std::vector<std::uint8_t>& x, int i) const {
    double field = diagonal[i];
    for (const auto& [j, c] : couplings[i])
      if (x[j]) field += c;
    return x[i] ? -field : field;
  }
};

bool lex_less(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

SolveResult solve_exhaustive(const QuboProblem& q) {
  const int n = q.variable_count();
  if (n < 1) throw ValidationError("empty qubo");
  if (n > 25)
    throw ValidationError("exhaustive solve limited to 25 variables, got " +
                          std::to_string(n));
  const QuboView view(q);

  std::vector<std::uint8_t> x(n, 0);
  std::vector<std::uint8_t> best = x;
  double energy = 0.0, best_energy = 0.0;

  // Gray-code walk: state k differs from k-1 in exactly one bit.
  const std::uint64_t total = 1ULL << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const int bit = std::countr_zero(k);
    energy += view.flip_delta(x, bit);
    x[bit] ^= 1;
    if (energy < best_energy ||
        (energy == best_energy && lex_less(x, best))) {
      best_energy = energy;
      best = x;
    }
  }

  SolveResult res;
  res.assignment = std::move(best);
  res.energy = q.evaluate(res.assignment);  // exact, no drift
  res.solver = "exhaustive";
  res.restarts = 1;
  return res;
}

SolveResult solve_sa(const QuboProblem& q, const AnnealSchedule& schedule,
                     std::uint64_t seed) {
  const int n = q.variable_count();
  if (n < 1) throw ValidationError("empty qubo");
  schedule.validate();
  const int proposals = schedule.sweeps_per_temp > 0 ? schedule.sweeps_per_temp : n;
  const QuboView view(q);

  SolveResult res;
  res.solver = "sa";
  res.restarts = schedule.restarts;
  res.seed = seed;
  double best_energy = 0.0;
  bool have_best = false;

  for (int restart = 0; restart < schedule.restarts; ++restart) {
    Rng rng(mix_seed(seed, "qubo-sa", static_cast<std::uint64_t>(restart)));
    std::vector<std::uint8_t> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.chance(0.5) ? 1 : 0;
    double energy = q.evaluate(x);

    std::vector<std::uint8_t> restart_best = x;
    double restart_best_energy = energy;
    std::uint64_t restart_best_iter = 0, iter = 0;

    for (double t = schedule.t_start; t > schedule.t_end; t *= schedule.alpha) {
      for (int s = 0; s < proposals; ++s) {
        ++iter;
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const double delta = view.flip_delta(x, i);
        if (delta <= 0.0 || rng.unit() < std::exp(-delta / t)) {
          x[i] ^= 1;
          energy += delta;
          if (energy < restart_best_energy) {
            restart_best_energy = energy;
            restart_best = x;
            restart_best_iter = iter;
          }
        }
      }
    }

    if (!have_best || restart_best_energy < best_energy) {
      have_best = true;
      best_energy = restart_best_energy;
      res.assignment = std::move(restart_best);
      res.best_restart = restart;
      res.best_iteration = restart_best_iter;
    }
  }

  res.energy = q.evaluate(res.assignment);
  return res;
}

namespace {

/// Strict descent over single flips and coupled pair flips until a fixed
/// point (or the sweep cap). Deterministic.
void descend(const QuboView& view, std::vector<std::uint8_t>& x) {
  const int n = static_cast<int>(x.size());
  bool improved = true;
  for (int sweep = 0; improved && sweep < 64; ++sweep) {
    improved = false;
    for (int i = 0; i < n; ++i) {
      if (view.flip_delta(x, i) < -1e-12) {
        x[i] ^= 1;
        improved = true;
      }
    }
    for (int i = 0; i < n; ++i) {
      const double di = view.flip_delta(x, i);
      x[i] ^= 1;
      bool kept = false;
      for (const auto& [j, c] : view.couplings[i]) {
        const double dj = view.flip_delta(x, j);
        if (di + dj < -1e-12) {
          x[j] ^= 1;
          kept = true;
          improved = true;
          break;
        }
      }
      if (!kept) x[i] ^= 1;
    }
  }
}

}  // namespace

SolveResult solve_hybrid(const QuboProblem& q, const AnnealSchedule& schedule,
                         std::uint64_t seed) {
  const int n = q.variable_count();
  if (n < 1) throw ValidationError("empty qubo");
  schedule.validate();
  const int proposals = schedule.sweeps_per_temp > 0 ? schedule.sweeps_per_temp : n;
  const QuboView view(q);

  SolveResult res;
  res.solver = "hybrid";
  res.restarts = schedule.restarts;
  res.seed = seed;
  double best_energy = 0.0;
  bool have_best = false;

  for (int restart = 0; restart < schedule.restarts; ++restart) {
    Rng rng(mix_seed(seed, "qubo-hybrid", static_cast<std::uint64_t>(restart)));
    std::vector<std::uint8_t> x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.chance(0.5) ? 1 : 0;
    double energy = q.evaluate(x);

    for (double t = schedule.t_start; t > schedule.t_end; t *= schedule.alpha) {
      for (int s = 0; s < proposals; ++s) {
        const int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const double delta = view.flip_delta(x, i);
        if (delta <= 0.0 || rng.unit() < std::exp(-delta / t)) {
          x[i] ^= 1;
          energy += delta;
        }
      }
    }
    descend(view, x);
    energy = q.evaluate(x);

    if (!have_best || energy < best_energy) {
      have_best = true;
      best_energy = energy;
      res.assignment = std::move(x);
      res.best_restart = restart;
    }
  }

  res.energy = q.evaluate(res.assignment);
  return res;
}

SolveResult ExhaustiveSolver::solve(const QuboProblem& q, std::uint64_t seed) {
  try {
    SolveResult res = solve_exhaustive(q);
    res.seed = seed;
    return res;
  } catch (const std::exception& e) {
    throw SolverError("exhaustive: " + std::string(e.what()));
  }
}

SolveResult SaSolver::solve(const QuboProblem& q, std::uint64_t seed) {
  try {
    AnnealSchedule sched = schedule_;
    if (sched.sweeps_per_temp <= 0) sched.sweeps_per_temp = q.variable_count();
    return solve_sa(q, sched, seed);
  } catch (const std::exception& e) {
    throw SolverError("sa: " + std::string(e.what()));
  }
}

SolveResult HybridSolver::solve(const QuboProblem& q, std::uint64_t seed) {
  try {
    AnnealSchedule sched = schedule_;
    if (sched.sweeps_per_temp <= 0) sched.sweeps_per_temp = q.variable_count();
    return solve_hybrid(q, sched, seed);
  } catch (const std::exception& e) {
    throw SolverError("hybrid: " + std::string(e.what()));
  }
}

std::unique_ptr<QuboSolver> make_solver(const std::string& name) {
  if (name == "exhaustive") return std::make_unique<ExhaustiveSolver>();
  if (name == "sa") return std::make_unique<SaSolver>();
  if (name == "hybrid") return std::make_unique<HybridSolver>();
  throw ValidationError("unknown solver backend '" + name + "'");
}

}  // namespace qkdplan
