#include "fbs/config.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace fbs {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& where, const std::string& msg) {
  throw InputError("config: " + where + ": " + msg);
}

double get_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) config_error(key, "expected a number");
  return j.at(key).get<double>();
}

Vector parse_vector(const json& j, const char* where) {
  if (!j.is_array()) config_error(where, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& e : j) {
    if (!e.is_number()) config_error(where, "expected numeric entries");
    v[i++] = e.get<double>();
  }
  return v;
}

Matrix parse_matrix(const json& j, const char* where) {
  if (!j.is_array() || j.empty()) config_error(where, "expected an array of rows");
  Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  Eigen::Index r = 0;
  for (const auto& row : j) {
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      config_error(where, "ragged matrix rows");
    }
    Eigen::Index c = 0;
    for (const auto& e : row) m(r, c++) = e.get<double>();
    ++r;
  }
  return m;
}

std::string get_kind(const json& j, const char* where, const char* field) {
  if (!j.is_object() || !j.contains(field)) {
    config_error(where, std::string("missing \"") + field + "\"");
  }
  return j.at(field).get<std::string>();
}

}  // namespace

ConvexSetSpec parse_set(const json& j) {
  std::string kind = get_kind(j, "set", "kind");
  if (kind == "box") {
    return ConvexSetSpec::box(parse_vector(j.at("lower"), "set.lower"),
                              parse_vector(j.at("upper"), "set.upper"));
  }
  if (kind == "ball") {
    return ConvexSetSpec::ball(parse_vector(j.at("center"), "set.center"),
                               j.at("radius").get<double>());
  }
  if (kind == "halfspace") {
    return ConvexSetSpec::halfspace(parse_vector(j.at("normal"), "set.normal"),
                                    j.at("offset").get<double>());
  }
  if (kind == "affine_subspace") {
    return ConvexSetSpec::affine_subspace(
        parse_matrix(j.at("matrix"), "set.matrix"),
        parse_vector(j.at("rhs"), "set.rhs"));
  }
  if (kind == "whole_space") {
    return ConvexSetSpec::whole_space(
        static_cast<Eigen::Index>(get_number(j, "dim", 0)));
  }
  config_error("set.kind", "unknown kind \"" + kind + "\"");
}

FunctionSpec parse_function(const json& j) {
  std::string kind = get_kind(j, "function", "kind");
  if (kind == "zero") return FunctionSpec::zero();
  if (kind == "l1") return FunctionSpec::l1_norm(get_number(j, "weight", 1.0));
  if (kind == "quadratic") {
    Matrix Q = parse_matrix(j.at("Q"), "function.Q");
    Vector b = j.contains("b") ? parse_vector(j.at("b"), "function.b")
                               : Vector(Vector::Zero(Q.rows()));
    return FunctionSpec::quadratic(std::move(Q), std::move(b));
  }
  if (kind == "indicator") return FunctionSpec::indicator(parse_set(j.at("set")));
  if (kind == "affine") {
    return FunctionSpec::affine(parse_vector(j.at("c"), "function.c"));
  }
  config_error("function.kind", "unknown kind \"" + kind + "\"");
}

ForwardOperatorSpec parse_forward_operator(const json& j) {
  std::string kind = get_kind(j, "operator", "type");
  ForwardOperatorSpec spec = [&]() -> ForwardOperatorSpec {
    if (kind == "zero") return ForwardOperatorSpec::zero();
    if (kind == "identity") return ForwardOperatorSpec::identity();
    if (kind == "affine") {
      Matrix M = parse_matrix(j.at("matrix"), "operator.matrix");
      Vector q = j.contains("offset")
                     ? parse_vector(j.at("offset"), "operator.offset")
                     : Vector(Vector::Zero(M.rows()));
      return ForwardOperatorSpec::affine(std::move(M), std::move(q));
    }
    if (kind == "gradient") {
      return ForwardOperatorSpec::gradient(parse_function(j.at("function")));
    }
    config_error("operator.type", "unknown type \"" + kind + "\"");
  }();
  if (j.contains("declared")) {
    const json& d = j.at("declared");
    std::optional<double> beta;
    if (d.contains("beta")) beta = d.at("beta").get<double>();
    spec = spec.with_moduli(get_number(d, "mu", spec.mu()),
                            get_number(d, "lipschitz", spec.lipschitz()), beta);
  }
  return spec;
}

MaximalOperatorSpec parse_maximal_operator(const json& j) {
  std::string kind = get_kind(j, "operator", "type");
  if (kind == "zero") return MaximalOperatorSpec::zero();
  if (kind == "scaled_identity") {
    return MaximalOperatorSpec::scaled_identity(j.at("kappa").get<double>());
  }
  if (kind == "linear") {
    return MaximalOperatorSpec::linear(parse_matrix(j.at("matrix"), "A.matrix"));
  }
  if (kind == "subdifferential") {
    return MaximalOperatorSpec::subdifferential(parse_function(j.at("function")));
  }
  if (kind == "normal_cone") {
    return MaximalOperatorSpec::normal_cone(parse_set(j.at("set")));
  }
  config_error("A.type", "unknown type \"" + kind + "\"");
}

ExperimentConfig parse_config(const json& j) {
  ExperimentConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.delta_floor = get_number(j, "delta_floor", kDefaultDeltaFloor);
  if (j.contains("enforce_assumptions") &&
      j.at("enforce_assumptions").get<bool>()) {
    cfg.enforcement = Enforcement::Error;
  }
  if (!j.contains("problem")) config_error("problem", "missing section");
  cfg.problem = j.at("problem");

  const json solver = j.value("solver", json::object());
  cfg.solver.lambda = get_number(solver, "lambda", 1.0);
  cfg.solver.sigma = get_number(solver, "sigma", 1.0);
  cfg.solver.scaling =
      ScalingParams(get_number(solver, "c1", 1.0), get_number(solver, "c2", 1.0),
                    get_number(solver, "kappa1", 0.5),
                    get_number(solver, "kappa2", 1.5));
  cfg.solver.gamma = get_number(solver, "gamma", 1e-2);
  cfg.solver.tol = get_number(solver, "tol", 1e-9);
  cfg.solver.max_steps =
      static_cast<long>(get_number(solver, "max_steps", 100000));
  std::string integrator = solver.value("integrator", "euler");
  if (integrator == "euler") {
    cfg.solver.integrator = IntegratorKind::Euler;
  } else if (integrator == "rk4") {
    cfg.solver.integrator = IntegratorKind::Rk4;
  } else {
    config_error("solver.integrator", "expected \"euler\" or \"rk4\"");
  }
  cfg.solver.record_iterates = solver.value("record_iterates", false);
  cfg.system = solver.value("system", "modified");
  if (cfg.system != "modified" && cfg.system != "nominal") {
    config_error("solver.system", "expected \"modified\" or \"nominal\"");
  }
  if (solver.contains("t_end")) cfg.t_end = solver.at("t_end").get<double>();

  const json bounds = j.value("bounds", json::object());
  if (bounds.contains("nu")) cfg.nu = bounds.at("nu").get<double>();
  if (bounds.contains("xi")) cfg.xi = bounds.at("xi").get<double>();

  if (j.contains("initial_points")) {
    const json& ip = j.at("initial_points");
    if (ip.is_array()) {
      for (const auto& p : ip) {
        cfg.explicit_points.push_back(parse_vector(p, "initial_points"));
      }
    } else if (ip.is_object()) {
      cfg.random_count = static_cast<int>(get_number(ip, "random", 1));
      if (ip.contains("radii")) {
        for (const auto& r : ip.at("radii")) {
          cfg.radii.push_back(r.get<double>());
        }
      }
      if (cfg.radii.empty()) cfg.radii.push_back(1.0);
      for (double r : cfg.radii) {
        if (!(r > 0.0)) config_error("initial_points.radii", "radii must be > 0");
      }
    } else {
      config_error("initial_points", "expected an array or an object");
    }
  }

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    cfg.sweep_axis = sw.value("axis", "");
    if (cfg.sweep_axis != "gamma" && cfg.sweep_axis != "lambda" &&
        cfg.sweep_axis != "kappa" && cfg.sweep_axis != "radius") {
      config_error("sweep.axis", "expected gamma|lambda|kappa|radius");
    }
    if (!sw.contains("values") || !sw.at("values").is_array() ||
        sw.at("values").empty()) {
      config_error("sweep.values", "expected a nonempty array");
    }
    for (const auto& v : sw.at("values")) {
      double val = v.get<double>();
      if (!std::isfinite(val)) config_error("sweep.values", "must be finite");
      cfg.sweep_values.push_back(val);
    }
  }

  const json outputs = j.value("outputs", json::object());
  cfg.trace_path = outputs.value("trace_path", "trace.csv");
  cfg.report_path = outputs.value("report_path", "report.json");
  cfg.sweep_path = outputs.value("sweep_path", "sweep.csv");
  if (outputs.contains("record_iterates")) {
    cfg.solver.record_iterates = outputs.at("record_iterates").get<bool>();
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("config: parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

BuiltProblem build_problem(const ExperimentConfig& cfg) {
  const json& p = cfg.problem;
  std::string type = get_kind(p, "problem", "type");
  if (type == "inclusion") {
    if (!p.contains("A") || !p.contains("B")) {
      config_error("problem", "inclusion requires \"A\" and \"B\"");
    }
    MaximalOperatorSpec A = parse_maximal_operator(p.at("A"));
    ForwardOperatorSpec B = parse_forward_operator(p.at("B"));
    Eigen::Index dim = static_cast<Eigen::Index>(get_number(p, "dim", 0));
    if (dim == 0) dim = A.dim() != 0 ? A.dim() : B.dim();
    if (dim == 0) config_error("problem.dim", "cannot infer dimension");
    return BuiltProblem{ProblemInstance(std::move(A), std::move(B), dim),
                        "inclusion", std::monostate{}, AdapterReport{}};
  }
  if (type == "cop") {
    CopSpec spec{parse_function(p.at("f")), parse_function(p.at("g"))};
    AdaptedProblem adapted = cop_to_inclusion(spec, cfg.enforcement);
    return BuiltProblem{std::move(adapted.instance), "cop", spec,
                        std::move(adapted.report)};
  }
  if (type == "mvi") {
    MviSpec spec{parse_forward_operator(p.at("F")), parse_function(p.at("g"))};
    AdaptedProblem adapted = mvi_to_inclusion(spec, cfg.enforcement);
    return BuiltProblem{std::move(adapted.instance), "mvi", spec,
                        std::move(adapted.report)};
  }
  if (type == "vi") {
    ViSpec spec{parse_forward_operator(p.at("F")), parse_set(p.at("C"))};
    AdaptedProblem adapted = vi_to_inclusion(spec, cfg.enforcement);
    return BuiltProblem{std::move(adapted.instance), "vi", spec,
                        std::move(adapted.report)};
  }
  config_error("problem.type", "unknown type \"" + type + "\"");
}

std::vector<Vector> initial_points(const ExperimentConfig& cfg, Eigen::Index dim,
                                   const Vector* anchor, std::uint64_t seed) {
  std::vector<Vector> points;
  for (const Vector& p : cfg.explicit_points) {
    if (p.size() != dim) {
      config_error("initial_points", "dimension mismatch with the problem");
    }
    points.push_back(p);
  }
  if (cfg.random_count > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (double radius : cfg.radii) {
      for (int k = 0; k < cfg.random_count; ++k) {
        Vector u(dim);
        double n = 0.0;
        do {
          for (Eigen::Index i = 0; i < dim; ++i) u[i] = gauss(rng);
          n = u.norm();
        } while (n < 1e-12);
        Vector x0 = (radius / n) * u;
        if (anchor != nullptr) x0 += *anchor;
        points.push_back(std::move(x0));
      }
    }
  }
  if (points.empty()) {
    Vector x0 = Vector::Ones(dim);
    if (anchor != nullptr) x0 += *anchor;
    points.push_back(std::move(x0));
  }
  return points;
}

}  // namespace fbs
