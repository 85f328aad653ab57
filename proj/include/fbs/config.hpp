#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbs/dynamics.hpp"
#include "fbs/problems.hpp"
#include "fbs/verify.hpp"

namespace fbs {

// Parsed experiment description (schema documented in the README).
struct ExperimentConfig {
  std::uint64_t seed = 1;
  double delta_floor = kDefaultDeltaFloor;
  Enforcement enforcement = Enforcement::Warn;

  nlohmann::json problem;

  SolverConfig solver;
  // "modified" (fixed-time field) or "nominal" (exponential field).
  std::string system = "modified";
  std::optional<double> t_end;

  std::optional<double> nu;
  std::optional<double> xi;

  std::vector<Vector> explicit_points;
  int random_count = 0;
  std::vector<double> radii;

  std::string sweep_axis;
  std::vector<double> sweep_values;

  std::string trace_path = "trace.csv";
  std::string report_path = "report.json";
  std::string sweep_path = "sweep.csv";
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);

struct BuiltProblem {
  ProblemInstance instance;
  std::string kind;  // inclusion | cop | mvi | vi
  SourceSpec source;
  AdapterReport adapter_report;
};

// Builders for the schema fragments (also used by tests).
ConvexSetSpec parse_set(const nlohmann::json& j);
FunctionSpec parse_function(const nlohmann::json& j);
ForwardOperatorSpec parse_forward_operator(const nlohmann::json& j);
MaximalOperatorSpec parse_maximal_operator(const nlohmann::json& j);

BuiltProblem build_problem(const ExperimentConfig& cfg);

// Initial points: explicit list, or `random_count` points per radius around
// the anchor (the solution when known, else the origin).
std::vector<Vector> initial_points(const ExperimentConfig& cfg,
                                   Eigen::Index dim, const Vector* anchor,
                                   std::uint64_t seed);

}  // namespace fbs
