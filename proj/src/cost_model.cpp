#include "qkdplan/cost_model.hpp"

#include <algorithm>
#include <cmath>

#include "qkdplan/errors.hpp"

namespace qkdplan {

const char* path_class_name(PathClass c) {
  switch (c) {
    case PathClass::Worst: return "Worst";
    case PathClass::Worse: return "Worse";
    case PathClass::Good: return "Good";
    case PathClass::Excellent: return "Excellent";
  }
  return "?";
}

double discount_factor(int q) {
  if (q < 0) throw ValidationError("discount count must be nonnegative");
  return 1.0 - std::pow(0.9, q);
}

double edge_cost(double key_rate, int q, int max_degree, int n_nodes) {
  if (key_rate <= 0.0) throw ValidationError("nonpositive key rate");
  if (max_degree < 1 || n_nodes < 2)
    throw ValidationError("edge_cost requires max_degree >= 1 and n_nodes >= 2");
  return (1.0 - discount_factor(q)) * max_degree * n_nodes / (key_rate * key_rate);
}

double path_cost_basic(const Path& p, const Network& net,
                       const std::map<Edge, double>& edge_costs) {
  const auto edges = p.edges();
  if (edges.empty()) throw ValidationError("empty path");
  auto cost_of = [&](const Edge& e) {
    auto it = edge_costs.find(e);
    if (it == edge_costs.end())
      throw ValidationError("path edge " + e.name() + " not costed");
    return it->second;
  };

  const double first_rate = net.key_rate(edges.front());
  bool bottleneck = false;
  double max_cost = cost_of(edges.front());
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (net.key_rate(edges[i]) < first_rate) bottleneck = true;
    max_cost = std::max(max_cost, cost_of(edges[i]));
  }
  const double len = static_cast<double>(p.length());
  return bottleneck ? len * max_cost : len * cost_of(edges.front());
}

namespace {

double median_of(const std::vector<double>& sorted, std::size_t lo, std::size_t hi) {
  // median of sorted[lo, hi)
  const std::size_t n = hi - lo;
  const std::size_t mid = lo + n / 2;
  if (n % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

}  // namespace

std::vector<PathClass> classify_paths(const std::vector<double>& basic_costs) {
  if (basic_costs.empty()) throw ValidationError("no paths to classify");
  std::vector<double> sorted = basic_costs;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = median_of(sorted, 0, n);
  const double q1 = median_of(sorted, 0, n / 2 == 0 ? 1 : n / 2);
  const double q3 = median_of(sorted, n - (n / 2 == 0 ? 1 : n / 2), n);

  std::vector<PathClass> out;
  out.reserve(basic_costs.size());
  for (double c : basic_costs) {
    if (c <= q1) out.push_back(PathClass::Excellent);
    else if (c <= median) out.push_back(PathClass::Good);
    else if (c <= q3) out.push_back(PathClass::Worse);
    else out.push_back(PathClass::Worst);
  }
  return out;
}

double final_path_cost(double basic, PathClass cls, int len) {
  if (len < 1) throw ValidationError("path length must be >= 1");
  double divisor = 0.0;
  switch (cls) {
    case PathClass::Worst: divisor = 0.25; break;
    case PathClass::Worse: divisor = 0.5; break;
    case PathClass::Good: divisor = 2.0; break;
    case PathClass::Excellent: divisor = 4.0; break;
  }
  return basic / (divisor * len);
}

std::pair<double, double> penalty_factors(double max_cost, PenaltyMode mode) {
  if (max_cost <= 0.0) throw ValidationError("max_cost must be positive");
  const double b = 0.5;
  double a = b * std::ceil(2.0 * max_cost);
  if (mode == PenaltyMode::nn) a += 1.0;
  return {a, b};
}

CostTable compute_cost_table(const std::vector<Path>& paths, const Network& net,
                             const DiscountState& discount, PenaltyMode mode) {
  CostTable table;
  for (const auto& rec : net.edges())
    table.edge_costs[rec.edge] =
        edge_cost(rec.key_rate, discount.count(rec.edge), net.max_degree(),
                  static_cast<int>(net.node_count()));

  table.basic_costs.reserve(paths.size());
  for (const Path& p : paths)
    table.basic_costs.push_back(path_cost_basic(p, net, table.edge_costs));

  table.classes = classify_paths(table.basic_costs);
  table.path_costs.reserve(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i)
    table.path_costs.push_back(
        final_path_cost(table.basic_costs[i], table.classes[i], paths[i].length()));
  table.max_cost = *std::max_element(table.path_costs.begin(), table.path_costs.end());

  const auto [a, b] = penalty_factors(table.max_cost, mode);
  table.penalty_a = a;
  table.penalty_b = b;
  return table;
}

}  // namespace qkdplan
