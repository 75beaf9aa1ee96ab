// Command line front end: reproducible planning, baseline and evaluation
// runs over QKD network files. Exit codes: 0 ok, 1 input/validation error,
// 2 infeasible request, 3 solver failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qkdplan/errors.hpp"
#include "qkdplan/evaluation.hpp"
#include "qkdplan/hqa.hpp"
#include "qkdplan/network.hpp"
#include "qkdplan/plan.hpp"
#include "qkdplan/qubo.hpp"
#include "qkdplan/sa_baseline.hpp"

namespace {

using namespace qkdplan;

struct CommonOpts {
  std::string input;
  std::string format = "auto";
  bool reference = false;
  std::uint64_t seed = 0;
  std::string start;
  int max_len = 6;
  std::string solver = "hybrid";
  int restarts = 0;  // 0: per-command default
  std::string out = ".";
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_planner_flags) {
  cmd->add_option("--input", opts.input, "network file (json or csv)");
  cmd->add_flag("--reference", opts.reference,
                "use the built-in 29-node reference network");
  cmd->add_option("--format", opts.format, "input format: json, csv or auto")
      ->check(CLI::IsMember({"json", "csv", "auto"}));
  cmd->add_option("--seed", opts.seed, "run seed (also seeds --reference)");
  cmd->add_option("--out", opts.out, "output directory");
  if (with_planner_flags) {
    cmd->add_option("--start", opts.start, "start node (default: highest degree)");
    cmd->add_option("--max-len", opts.max_len, "path length bound");
    cmd->add_option("--solver", opts.solver, "qubo backend")
        ->check(CLI::IsMember({"hybrid", "sa", "exhaustive"}));
    cmd->add_option("--restarts", opts.restarts, "restart count override");
  }
}

Network load_input(const CommonOpts& opts) {
  if (opts.reference) return reference_network(opts.seed);
  if (opts.input.empty())
    throw ValidationError("either --input or --reference is required");
  NetworkFormat format = NetworkFormat::json;
  if (opts.format == "csv" ||
      (opts.format == "auto" && opts.input.ends_with(".csv")))
    format = NetworkFormat::csv_triple;
  return load_network(opts.input, format);
}

NodeId pick_start(const Network& net, const CommonOpts& opts) {
  if (!opts.start.empty()) {
    net.node_index(opts.start);
    return opts.start;
  }
  NodeId best = net.nodes().front().id;
  for (const auto& n : net.nodes())
    if (net.degree(net.node_index(n.id)) >
        net.degree(net.node_index(best)))
      best = n.id;
  return best;
}

std::string out_dir(const CommonOpts& opts) {
  const char* env = std::getenv("QKDPLAN_OUT");
  std::string dir = env && *env ? env : opts.out;
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

std::unique_ptr<QuboSolver> build_solver(const CommonOpts& opts) {
  if (opts.solver == "exhaustive") return std::make_unique<ExhaustiveSolver>();
  AnnealSchedule schedule;
  schedule.restarts = opts.restarts > 0 ? opts.restarts : 10;
  if (opts.solver == "sa") return std::make_unique<SaSolver>(schedule);
  return std::make_unique<HybridSolver>(schedule);
}

void write_solution_files(const std::string& dir, const Network& net,
                          const PlanSolution& plan, bool with_failure) {
  write_file(dir + "/solution.json", plan_to_json_text(plan));
  write_file(dir + "/solution.dot", export_graph(net, plan.edges, ExportFormat::dot));
  const EvaluationReport report = evaluate_solution(net, plan.edges, with_failure);
  write_file(dir + "/report.json", report_to_json(report).dump(2) + "\n");
  write_file(dir + "/report.csv", report_to_csv(report, net));
}

void print_improvement(const PlanSolution& plan) {
  char line[64];
  std::snprintf(line, sizeof line, "edge improvement: %.2f%%",
                plan.edge_improvement_pct);
  std::cout << line << "\n";
  std::cout << "min key rate: " << plan.min_key_rate << " kbit/s\n";
  std::cout << "edges: " << plan.edges.size() << "\n";
}

int cmd_plan_nn(const CommonOpts& opts) {
  const Network net = load_input(opts);
  auto solver = build_solver(opts);
  const PlanSolution plan =
      run_hqa(net, pick_start(net, opts), opts.max_len, *solver, opts.seed);
  write_solution_files(out_dir(opts), net, plan, false);
  print_improvement(plan);
  return 0;
}

int cmd_plan_redundant(const CommonOpts& opts, const std::string& base,
                       int max_rounds) {
  const Network net = load_input(opts);
  auto solver = build_solver(opts);
  EdgeSet input_net;
  if (!base.empty()) {
    input_net = load_plan(base).edges;
  } else {
    input_net =
        run_hqa(net, pick_start(net, opts), opts.max_len, *solver, opts.seed).edges;
  }
  const PlanSolution plan =
      run_redundancy(net, input_net, *solver, opts.seed, max_rounds, opts.max_len);
  write_solution_files(out_dir(opts), net, plan, true);
  print_improvement(plan);
  return 0;
}

int cmd_baseline_sa(const CommonOpts& opts, int runs, bool redundant) {
  const Network net = load_input(opts);
  SaConfig config;
  config.redundancy_mode = redundant;
  if (opts.restarts > 0) config.restarts = opts.restarts;

  const std::string dir = out_dir(opts);
  std::filesystem::create_directories(dir + "/solutions");

  std::ostringstream csv;
  csv << "run,edge_improvement_pct,min_key_rate_kbps,edges,best_energy\n";
  PlanSolution best;
  double best_energy = 0.0;
  bool have_best = false;

  for (int run = 0; run < runs; ++run) {
    config.seed = mix_seed(opts.seed, "baseline", static_cast<std::uint64_t>(run));
    PlanSolution plan = run_sa(net, config);
    const double energy = plan.provenance.at("best_energy").get<double>();
    char row[160];
    std::snprintf(row, sizeof row, "%d,%.2f,%s,%zu,%s\n", run,
                  plan.edge_improvement_pct,
                  nlohmann::json(plan.min_key_rate).dump().c_str(),
                  plan.edges.size(), nlohmann::json(energy).dump().c_str());
    csv << row;
    char name[64];
    std::snprintf(name, sizeof name, "/solutions/run_%03d.json", run);
    write_file(dir + name, plan_to_json_text(plan));
    if (!have_best || energy < best_energy) {
      have_best = true;
      best_energy = energy;
      best = std::move(plan);
    }
  }

  write_file(dir + "/runs.csv", csv.str());
  write_solution_files(dir, net, best, redundant);
  print_improvement(best);
  return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& solution_path,
                 bool failure) {
  const Network net = load_input(opts);
  const PlanSolution plan = load_plan(solution_path);
  validate_edge_set(net, plan.edges);
  const EvaluationReport report = evaluate_solution(net, plan.edges, failure);
  const std::string dir = out_dir(opts);
  write_file(dir + "/report.json", report_to_json(report).dump(2) + "\n");
  write_file(dir + "/report.csv", report_to_csv(report, net));
  char line[64];
  std::snprintf(line, sizeof line, "edge improvement: %.2f%%",
                report.edge_improvement_pct);
  std::cout << line << "\n";
  return 0;
}

int cmd_heuristic(const CommonOpts& opts) {
  const Network net = load_input(opts);
  const PlanSolution plan = circle_heuristic(net, pick_start(net, opts));
  write_solution_files(out_dir(opts), net, plan, true);
  print_improvement(plan);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QKD network deployment planner"};
  app.require_subcommand(1);

  CommonOpts plan_opts, red_opts, sa_opts, eval_opts, heur_opts;
  std::string base_solution, eval_solution;
  int max_rounds = 10;
  int runs = 1;
  bool redundant = false, failure = false;

  CLI::App* plan_nn = app.add_subcommand("plan-nn", "hybrid per-root planner");
  add_common(plan_nn, plan_opts, true);

  CLI::App* plan_red =
      app.add_subcommand("plan-redundant", "planner with circle redundancy");
  add_common(plan_red, red_opts, true);
  plan_red->add_option("--base", base_solution, "base solution.json (else planned inline)");
  plan_red->add_option("--max-rounds", max_rounds, "bridge workaround rounds");

  CLI::App* baseline = app.add_subcommand("baseline-sa", "simulated annealing baseline");
  add_common(baseline, sa_opts, true);
  baseline->add_option("--runs", runs, "independent runs");
  baseline->add_flag("--redundant", redundant, "require 2-edge-connected candidates");

  CLI::App* evaluate = app.add_subcommand("evaluate", "traffic/failure report for a solution");
  add_common(evaluate, eval_opts, false);
  evaluate->add_option("--solution", eval_solution, "solution.json to evaluate")->required();
  evaluate->add_flag("--failure", failure, "include single-failure load sweep");

  CLI::App* heuristic = app.add_subcommand("heuristic", "classical circle heuristic");
  add_common(heuristic, heur_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_nn->parsed()) return cmd_plan_nn(plan_opts);
    if (plan_red->parsed()) return cmd_plan_redundant(red_opts, base_solution, max_rounds);
    if (baseline->parsed()) return cmd_baseline_sa(sa_opts, runs, redundant);
    if (evaluate->parsed()) return cmd_evaluate(eval_opts, eval_solution, failure);
    if (heuristic->parsed()) return cmd_heuristic(heur_opts);
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
