#include "qkdplan/plan.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "qkdplan/errors.hpp"
#include "qkdplan/evaluation.hpp"

namespace qkdplan {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

PlanSolution make_plan_solution(const Network& net, EdgeSet edges,
                                nlohmann::ordered_json provenance) {
  validate_edge_set(net, edges);
  PlanSolution plan;
  plan.edge_improvement_pct = edge_improvement(net, edges);
  plan.min_key_rate = min_key_rate(net, edges);
  plan.edges = std::move(edges);
  plan.provenance = std::move(provenance);
  return plan;
}

nlohmann::ordered_json plan_to_json(const PlanSolution& plan) {
  nlohmann::ordered_json doc;
  doc["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : plan.edges) doc["edges"].push_back({e.u, e.v});
  doc["metrics"] = {{"edge_improvement_pct", plan.edge_improvement_pct},
                    {"min_key_rate_kbps", plan.min_key_rate}};
  doc["provenance"] = plan.provenance;
  return doc;
}

std::string plan_to_json_text(const PlanSolution& plan) {
  return plan_to_json(plan).dump(2) + "\n";
}

PlanSolution plan_from_json_text(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("solution parse failure: ") + e.what());
  }
  PlanSolution plan;
  try {
    for (const auto& pair : doc.at("edges"))
      plan.edges.insert(make_edge(pair.at(0).get<std::string>(),
                                  pair.at(1).get<std::string>()));
    plan.edge_improvement_pct = doc.at("metrics").at("edge_improvement_pct").get<double>();
    plan.min_key_rate = doc.at("metrics").at("min_key_rate_kbps").get<double>();
    if (doc.contains("provenance")) plan.provenance = doc.at("provenance");
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad solution json: ") + e.what());
  }
  return plan;
}

PlanSolution load_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return plan_from_json_text(buf.str());
}

}  // namespace qkdplan
