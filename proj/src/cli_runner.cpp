#include "fbs/cli_runner.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "fbs/config.hpp"

namespace fbs {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json interval_json(const LambdaInterval& itv) {
  json hi;
  if (std::isfinite(itv.hi)) {
    hi = itv.hi;
  } else {
    hi = "inf";
  }
  return json::array({itv.lo, hi});
}

json optional_json(const std::optional<double>& v) {
  if (v && std::isfinite(*v)) return *v;
  return nullptr;
}

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json feasibility_json(const FeasibilityReport& rep) {
  json j;
  j["branch"] = to_string(rep.branch);
  j["interval"] = interval_json(rep.lambda_interval);
  j["lambda"] = rep.lambda;
  j["lambda_feasible"] = rep.lambda_feasible;
  j["tau"] = finite_or_null(rep.tau);
  j["delta"] = finite_or_null(rep.delta);
  j["epsilon_delta"] = finite_or_null(rep.epsilon_delta);
  if (std::isfinite(rep.kappa1_window_lo)) {
    j["kappa1_window"] = json::array({rep.kappa1_window_lo, 1.0});
  } else {
    j["kappa1_window"] = nullptr;
  }
  return j;
}

void write_text_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

struct Prepared {
  ExperimentConfig cfg;
  BuiltProblem built;
  FeasibilityReport feas;
};

Prepared prepare(const CliOptions& opt) {
  ExperimentConfig cfg = load_config_file(opt.config_path);
  if (opt.seed) cfg.seed = *opt.seed;
  BuiltProblem built = build_problem(cfg);
  FeasibilityReport feas = feasibility_report(
      built.instance.A.mu(), built.instance.B.mu(), built.instance.B.lipschitz(),
      cfg.solver.lambda, cfg.delta_floor);
  return Prepared{std::move(cfg), std::move(built), feas};
}

Trace run_configured_trace(const Prepared& prep, const Vector& x0,
                           const Vector* x_star) {
  const ExperimentConfig& cfg = prep.cfg;
  if (cfg.system == "nominal") {
    if (cfg.solver.integrator == IntegratorKind::Euler) {
      return euler_nominal(prep.built.instance, cfg.solver.sigma,
                           cfg.solver.gamma, cfg.solver.lambda, x0,
                           cfg.solver.tol, cfg.solver.max_steps, x_star);
    }
    double t_end = cfg.t_end ? *cfg.t_end
                             : cfg.solver.gamma *
                                   static_cast<double>(cfg.solver.max_steps);
    return integrate_continuous(prep.built.instance, cfg.solver,
                                FieldKind::Nominal, x0, t_end, x_star);
  }
  if (cfg.solver.integrator == IntegratorKind::Euler) {
    return euler_modified(prep.built.instance, cfg.solver, x0, x_star);
  }
  double t_end = cfg.t_end ? *cfg.t_end
                           : cfg.solver.gamma *
                                 static_cast<double>(cfg.solver.max_steps);
  return integrate_continuous(prep.built.instance, cfg.solver,
                              FieldKind::Modified, x0, t_end, x_star);
}

struct BoundSummary {
  std::optional<SettlingBound> bound;
  std::string rejection;
};

BoundSummary compute_bound(const Prepared& prep) {
  BoundSummary out;
  if (!prep.feas.lambda_feasible) {
    out.rejection = "lambda infeasible";
    return out;
  }
  try {
    double delta = working_delta(prep.feas.tau, prep.cfg.delta_floor);
    out.bound = build_bound(delta, prep.cfg.solver.scaling, prep.cfg.nu,
                            prep.cfg.xi, prep.cfg.solver.gamma);
  } catch (const Error& e) {
    out.rejection = e.what();
  }
  return out;
}

json bound_json(const BoundSummary& bs) {
  if (!bs.bound) {
    return json{{"error", bs.rejection}};
  }
  const SettlingBound& b = *bs.bound;
  json j;
  j["delta"] = b.delta;
  j["q"] = json::array({b.q1, b.q2});
  j["p"] = json::array({b.p1, b.p2});
  j["alpha"] = json::array({b.alpha1, b.alpha2});
  j["t_max_general"] = b.t_max_general;
  j["t_max_pi"] = optional_json(b.t_max_pi);
  j["nu"] = optional_json(b.nu);
  j["n_star"] = b.n_star ? json(*b.n_star) : json(nullptr);
  j["gamma"] = optional_json(b.gamma);
  return j;
}

int status_exit_code(TerminalStatus s) {
  return s == TerminalStatus::Converged ? kExitOk : kExitDiverged;
}

}  // namespace

int run_solve(const CliOptions& opt) {
  Prepared prep = prepare(opt);
  const ExperimentConfig& cfg = prep.cfg;
  fs::path out_dir(opt.out_dir);

  std::vector<std::string> warnings = prep.built.adapter_report.warnings;
  if (prep.built.kind != "inclusion") {
    validate_lambda_window(prep.built.adapter_report, cfg.solver.lambda,
                           cfg.enforcement);
    warnings = prep.built.adapter_report.warnings;
  }

  if (!prep.feas.lambda_feasible && !opt.override_feasibility) {
    json err;
    err["error"] = "infeasible parameters (use --override-feasibility to force)";
    err["feasibility"] = feasibility_json(prep.feas);
    write_json_file(out_dir / cfg.report_path, err);
    std::cerr << "solve: lambda = " << cfg.solver.lambda
              << " is outside the feasible interval; report written\n";
    return kExitInfeasible;
  }

  std::optional<SolutionCertificate> cert;
  try {
    cert = solve_fixed_point(prep.built.instance, cfg.solver.lambda,
                             Vector::Zero(prep.built.instance.dim),
                             std::min(cfg.solver.tol, 1e-12), 500000);
  } catch (const NonConvergenceError& e) {
    if (!opt.override_feasibility) throw;
    warnings.push_back(std::string("no solution certificate: ") + e.what());
  }

  const Vector* anchor = cert ? &cert->x_star : nullptr;
  std::vector<Vector> points =
      initial_points(cfg, prep.built.instance.dim, anchor, cfg.seed);
  Trace trace = run_configured_trace(prep, points.front(), anchor);

  BoundSummary bs = compute_bound(prep);
  std::optional<double> settle;
  if (cert) {
    double eps = prep.feas.delta > 0.0 && prep.feas.delta < 1.0
                     ? cfg.solver.tol / (1.0 - prep.feas.delta)
                     : cfg.solver.tol;
    settle = empirical_settling_time(trace, eps);
  }

  write_text_file(out_dir / cfg.trace_path, trace_to_csv(trace));

  json summary;
  if (cert) {
    summary["x_star"] = std::vector<double>(
        cert->x_star.data(), cert->x_star.data() + cert->x_star.size());
    summary["residual"] = cert->residual_norm;
    summary["iterations"] = cert->iterations;
  } else {
    summary["x_star"] = nullptr;
    summary["residual"] = nullptr;
  }
  summary["empirical_settling_time"] = optional_json(settle);
  if (bs.bound) {
    summary["t_max_general"] = bs.bound->t_max_general;
    summary["t_max_pi"] = optional_json(bs.bound->t_max_pi);
    summary["n_star"] = bs.bound->n_star ? json(*bs.bound->n_star) : json(nullptr);
  } else {
    summary["t_max_general"] = nullptr;
    summary["t_max_pi"] = nullptr;
    summary["n_star"] = nullptr;
    summary["bound_error"] = bs.rejection;
  }
  summary["terminal_status"] = to_string(trace.terminal_status);
  summary["steps"] = trace.rows.empty() ? 0 : trace.rows.back().step;
  summary["feasibility"] = feasibility_json(prep.feas);
  for (const std::string& w : trace.warnings) warnings.push_back(w);
  summary["warnings"] = warnings;
  write_json_file(out_dir / cfg.report_path, summary);

  return status_exit_code(trace.terminal_status);
}

int run_sweep(const CliOptions& opt) {
  Prepared prep = prepare(opt);
  const ExperimentConfig& cfg = prep.cfg;
  if (cfg.sweep_axis.empty()) {
    std::cerr << "sweep: config has no sweep section\n";
    return kExitUsage;
  }

  std::optional<SolutionCertificate> cert;
  if (prep.feas.lambda_feasible) {
    cert = solve_fixed_point(prep.built.instance, cfg.solver.lambda,
                             Vector::Zero(prep.built.instance.dim), 1e-12,
                             500000);
  }
  const Vector* anchor = cert ? &cert->x_star : nullptr;
  std::vector<Vector> points =
      initial_points(cfg, prep.built.instance.dim, anchor, cfg.seed);

  std::string csv =
      "axis,value,steps_to_tol,empirical_settling_time,t_max_general,t_max_pi,"
      "n_star,status\n";
  char buf[64];
  auto field = [&](double v) {
    if (!std::isfinite(v)) return std::string();
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };

  for (double value : cfg.sweep_values) {
    Prepared run = prep;  // copy; each row tweaks one knob
    Vector x0 = points.front();
    std::string status;
    std::string row_bound_gen, row_bound_pi, row_nstar;
    double steps_to_tol = std::numeric_limits<double>::quiet_NaN();
    double settle_time = std::numeric_limits<double>::quiet_NaN();
    try {
      if (cfg.sweep_axis == "gamma") {
        run.cfg.solver.gamma = value;
      } else if (cfg.sweep_axis == "lambda") {
        run.cfg.solver.lambda = value;
        run.feas = feasibility_report(
            run.built.instance.A.mu(), run.built.instance.B.mu(),
            run.built.instance.B.lipschitz(), value, run.cfg.delta_floor);
      } else if (cfg.sweep_axis == "kappa") {
        run.cfg.solver.scaling =
            ScalingParams(cfg.solver.scaling.c1, cfg.solver.scaling.c2, value,
                          cfg.solver.scaling.kappa2);
        run.cfg.nu.reset();
        run.cfg.xi.reset();
      } else if (cfg.sweep_axis == "radius") {
        std::mt19937_64 rng(cfg.seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vector u(run.built.instance.dim);
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = gauss(rng);
        u.normalize();
        x0 = value * u;
        if (anchor) x0 += *anchor;
      }

      if (!run.feas.lambda_feasible) {
        status = "infeasible";
      } else {
        Trace trace = run_configured_trace(run, x0, anchor);
        status = to_string(trace.terminal_status);
        if (trace.terminal_status == TerminalStatus::Converged &&
            !trace.rows.empty()) {
          steps_to_tol = static_cast<double>(trace.rows.back().step);
        }
        if (cert) {
          double eps = run.feas.delta > 0.0 && run.feas.delta < 1.0
                           ? run.cfg.solver.tol / (1.0 - run.feas.delta)
                           : run.cfg.solver.tol;
          if (auto s = empirical_settling_time(trace, eps)) settle_time = *s;
        }
        BoundSummary bs = compute_bound(run);
        if (bs.bound) {
          row_bound_gen = field(bs.bound->t_max_general);
          if (bs.bound->t_max_pi) row_bound_pi = field(*bs.bound->t_max_pi);
          if (bs.bound->n_star) row_nstar = std::to_string(*bs.bound->n_star);
        } else if (status != "diverged") {
          // settling rejection flags the row even when the run also stalled
          status = "window_rejected";
        }
      }
    } catch (const Error& e) {
      status = std::string("error: ") + e.what();
    }
    csv += cfg.sweep_axis + "," + field(value) + "," + field(steps_to_tol) +
           "," + field(settle_time) + "," + row_bound_gen + "," + row_bound_pi +
           "," + row_nstar + "," + status + "\n";
  }

  write_text_file(fs::path(opt.out_dir) / cfg.sweep_path, csv);
  return kExitOk;
}

int run_verify_command(const CliOptions& opt) {
  Prepared prep = prepare(opt);
  VerifySettings settings;
  settings.seed = prep.cfg.seed;
  VerifyReport report =
      run_verify(prep.built.instance, prep.cfg.solver.lambda,
                 prep.cfg.solver.scaling, prep.cfg.nu, prep.cfg.delta_floor,
                 settings, prep.built.source);

  json entries = json::array();
  for (const InvariantResult& e : report.entries) {
    std::cout << (e.pass ? "PASS " : "FAIL ") << e.name << " (samples "
              << e.samples << ", max violation " << e.max_violation << ")";
    if (!e.note.empty()) std::cout << " - " << e.note;
    std::cout << "\n";
    json je;
    je["name"] = e.name;
    je["samples"] = e.samples;
    je["max_violation"] = finite_or_null(e.max_violation);
    je["pass"] = e.pass;
    if (!e.note.empty()) je["note"] = e.note;
    entries.push_back(je);
  }
  json j;
  j["entries"] = entries;
  j["all_pass"] = report.all_pass();
  write_json_file(fs::path(opt.out_dir) / prep.cfg.report_path, j);
  return report.all_pass() ? kExitOk : kExitInvariantFailure;
}

int run_feasibility_command(const CliOptions& opt) {
  Prepared prep = prepare(opt);
  json j = feasibility_json(prep.feas);
  std::cout << j.dump(2) << "\n";
  write_json_file(fs::path(opt.out_dir) / prep.cfg.report_path, j);
  return prep.feas.lambda_feasible ? kExitOk : kExitInfeasible;
}

int run_bounds_command(const CliOptions& opt) {
  Prepared prep = prepare(opt);
  if (!prep.feas.lambda_feasible) {
    json err;
    err["error"] = "infeasible parameters";
    err["feasibility"] = feasibility_json(prep.feas);
    std::cout << err.dump(2) << "\n";
    write_json_file(fs::path(opt.out_dir) / prep.cfg.report_path, err);
    return kExitInfeasible;
  }
  BoundSummary bs = compute_bound(prep);
  json j = bound_json(bs);
  std::cout << j.dump(2) << "\n";
  write_json_file(fs::path(opt.out_dir) / prep.cfg.report_path, j);
  return bs.bound ? kExitOk : kExitInfeasible;
}

}  // namespace fbs
