#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qkdplan {

/// Sparse upper-triangular QUBO over labelled binary variables. Diagonal
/// entries are the linear terms; symmetric inputs are folded into the
/// canonical (i <= j) cell.
class QuboProblem {
 public:
  QuboProblem() = default;
  explicit QuboProblem(std::vector<std::string> labels);

  /// Appends a variable; labels must stay unique.
  int add_variable(const std::string& label);

  /// Accumulates c into Q[min(i,j)][max(i,j)].
  void add(int i, int j, double c);

  int variable_count() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::map<std::pair<int, int>, double>& coefficients() const {
    return coeff_;
  }

  /// sum_{i<=j} Q_ij x_i x_j; throws on length mismatch.
  double evaluate(const std::vector<std::uint8_t>& x) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> label_index_;
  std::map<std::pair<int, int>, double> coeff_;
};

double evaluate(const QuboProblem& q, const std::vector<std::uint8_t>& x);

/// Text dump: "labels <n>" header with one "<index> <label>" line each,
/// then "terms <m>" with one "i j coefficient" line each, (i, j) ascending.
std::string dump_qubo(const QuboProblem& q);

struct SolveResult {
  std::vector<std::uint8_t> assignment;
  double energy = 0.0;  // always re-evaluated from the assignment
  std::string solver;
  int restarts = 0;
  std::uint64_t seed = 0;
  int best_restart = 0;
  std::uint64_t best_iteration = 0;
};

/// Geometric cooling schedule for the internal sampler. sweeps_per_temp is
/// the number of single-bit-flip proposals made at each temperature level.
struct AnnealSchedule {
  double t_start = 1000.0;
  double t_end = 0.0001;
  double alpha = 0.9;
  int sweeps_per_temp = 0;  // <= 0: one proposal per variable
  int restarts = 10;

  static AnnealSchedule defaults_for(int variable_count);
  void validate() const;
};

/// Number of t -> alpha*t steps needed to fall from t_start to <= t_end.
int cooling_steps(double t_start, double t_end, double alpha);

/// Global minimum by enumeration (<= 25 variables); among energy ties the
/// lexicographically smallest bit vector wins.
SolveResult solve_exhaustive(const QuboProblem& q);

/// Restarted single-flip Metropolis sampler with geometric cooling.
/// Deterministic for a fixed seed; restart results merge by (energy,
/// restart index).
SolveResult solve_sa(const QuboProblem& q, const AnnealSchedule& schedule,
                     std::uint64_t seed);

/// solve_sa plus a deterministic pairwise-descent polish per restart.
SolveResult solve_hybrid(const QuboProblem& q, const AnnealSchedule& schedule,
                         std::uint64_t seed);

/// Pluggable solver slot so planners stay backend-agnostic.
class QuboSolver {
 public:
  virtual ~QuboSolver() = default;
  virtual std::string name() const = 0;
  /// Must satisfy result.energy == evaluate(q, result.assignment).
  /// Failures surface as SolverError carrying name().
  virtual SolveResult solve(const QuboProblem& q, std::uint64_t seed) = 0;
};

class ExhaustiveSolver : public QuboSolver {
 public:
  std::string name() const override { return "exhaustive"; }
  SolveResult solve(const QuboProblem& q, std::uint64_t seed) override;
};

class SaSolver : public QuboSolver {
 public:
  SaSolver() = default;
  explicit SaSolver(AnnealSchedule schedule) : schedule_(schedule) {}
  std::string name() const override { return "sa"; }
  SolveResult solve(const QuboProblem& q, std::uint64_t seed) override;

 private:
  AnnealSchedule schedule_;  // sweeps_per_temp <= 0 resolves per problem
};

/// Annealing plus a deterministic descent polish with coupled pair moves.
/// Single-bit chains freeze inside one-hot constraint groups (swapping a
/// selection needs two flips through a penalty barrier); the pair moves
/// cross exactly those barriers. Default backend for the planners.
class HybridSolver : public QuboSolver {
 public:
  HybridSolver() = default;
  explicit HybridSolver(AnnealSchedule schedule) : schedule_(schedule) {}
  std::string name() const override { return "hybrid"; }
  SolveResult solve(const QuboProblem& q, std::uint64_t seed) override;

 private:
  AnnealSchedule schedule_;
};

std::unique_ptr<QuboSolver> make_solver(const std::string& name);

}  // namespace qkdplan
