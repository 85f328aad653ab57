#include "fbs/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fbs {

namespace {

constexpr double kDivergenceFactor = 1e12;

double nan_double() { return std::numeric_limits<double>::quiet_NaN(); }

TraceRow make_row(long step, double time, double residual_norm, double phi_value,
                  const Vector& x, const Vector* x_star, bool record_iterate) {
  TraceRow row;
  row.step = step;
  row.time = time;
  row.residual_norm = residual_norm;
  row.phi = phi_value;
  if (x_star != nullptr) {
    double dist = (x - *x_star).norm();
    row.distance_to_solution = dist;
    row.lyapunov = 0.5 * dist * dist;
  }
  if (record_iterate) row.iterate = x;
  return row;
}

void append_field(std::string& out, double v) {
  if (std::isnan(v)) return;  // empty field
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Converged:
      return "converged";
    case TerminalStatus::MaxSteps:
      return "max_steps";
    case TerminalStatus::Diverged:
      return "diverged";
  }
  return "?";
}

SolutionCertificate solve_fixed_point(const ProblemInstance& P, double lambda,
                                      const Vector& x0, double tol,
                                      long max_iterations) {
  if (!(tol > 0.0)) throw InputError("solve_fixed_point: requires tol > 0");
  if (max_iterations <= 0) {
    throw InputError("solve_fixed_point: requires max_iterations > 0");
  }
  Vector x = x0;
  double rn = nan_double();
  for (long k = 0; k <= max_iterations; ++k) {
    Vector t = fb_map(P, lambda, x);
    rn = (x - t).norm();
    if (rn <= tol) return SolutionCertificate{std::move(x), rn, k};
    x = std::move(t);
  }
  std::ostringstream os;
  os << "solve_fixed_point: no convergence within " << max_iterations
     << " iterations (last residual " << rn << ")";
  throw NonConvergenceError(os.str(), rn);
}

Trace euler_modified(const ProblemInstance& P, const SolverConfig& cfg,
                     const Vector& x0, const Vector* x_star) {
  if (!(cfg.gamma > 0.0)) throw InputError("euler_modified: requires gamma > 0");
  if (!(cfg.tol > 0.0)) throw InputError("euler_modified: requires tol > 0");
  if (cfg.max_steps <= 0) {
    throw InputError("euler_modified: requires max_steps > 0");
  }
  Trace trace;
  Vector x = x0;
  double initial_rn = -1.0;
  for (long step = 0; step <= cfg.max_steps; ++step) {
    Vector t = fb_map(P, cfg.lambda, x);
    Vector r = x - t;
    double rn = r.norm();
    double coeff = scaling_coefficient(cfg.scaling, rn, residual_guard(x));
    trace.rows.push_back(make_row(step, step * cfg.gamma, rn, coeff, x, x_star,
                                  cfg.record_iterates));
    if (step == 0) initial_rn = rn;
    if (rn <= cfg.tol) {
      trace.terminal_status = TerminalStatus::Converged;
      return trace;
    }
    if (rn > kDivergenceFactor * std::max(initial_rn, 1.0)) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
    if (step == cfg.max_steps) break;
    x -= (cfg.gamma * coeff) * r;
    if (!x.allFinite()) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
  }
  trace.terminal_status = TerminalStatus::MaxSteps;
  return trace;
}

Trace euler_nominal(const ProblemInstance& P, double sigma, double gamma,
                    double lambda, const Vector& x0, double tol, long max_steps,
                    const Vector* x_star, bool record_iterates) {
  if (!(sigma > 0.0)) throw InputError("euler_nominal: requires sigma > 0");
  if (!(gamma > 0.0)) throw InputError("euler_nominal: requires gamma > 0");
  if (!(tol > 0.0)) throw InputError("euler_nominal: requires tol > 0");
  if (max_steps <= 0) throw InputError("euler_nominal: requires max_steps > 0");

  Trace trace;
  double w = gamma * sigma;
  // Stability window of the relaxed iteration; a warning, not an error.
  if (check_assumption_A(P.A.mu(), P.B.mu(), P.B.lipschitz(), lambda)) {
    double tau = contraction_factor(P.A.mu(), P.B.mu(), P.B.lipschitz(), lambda);
    double delta = working_delta(tau, kDefaultDeltaFloor);
    if (!(w < 2.0 / (1.0 + delta))) {
      std::ostringstream os;
      os << "euler_nominal: gamma*sigma = " << w
         << " outside the contraction window (0, " << 2.0 / (1.0 + delta) << ")";
      trace.warnings.push_back(os.str());
    }
  }

  Vector x = x0;
  double initial_rn = -1.0;
  for (long step = 0; step <= max_steps; ++step) {
    Vector t = fb_map(P, lambda, x);
    Vector r = x - t;
    double rn = r.norm();
    trace.rows.push_back(make_row(step, step * gamma, rn, nan_double(), x,
                                  x_star, record_iterates));
    if (step == 0) initial_rn = rn;
    if (rn <= tol) {
      trace.terminal_status = TerminalStatus::Converged;
      return trace;
    }
    if (rn > kDivergenceFactor * std::max(initial_rn, 1.0)) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
    if (step == max_steps) break;
    if (w == 1.0) {
      x = std::move(t);  // exact Banach recursion, bitwise
    } else {
      x -= w * r;
    }
    if (!x.allFinite()) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
  }
  trace.terminal_status = TerminalStatus::MaxSteps;
  return trace;
}

Trace integrate_continuous(const ProblemInstance& P, const SolverConfig& cfg,
                           FieldKind field, const Vector& x0, double t_end,
                           const Vector* x_star) {
  if (!(cfg.gamma > 0.0)) {
    throw InputError("integrate_continuous: requires gamma > 0");
  }
  if (!(t_end >= 0.0)) {
    throw InputError("integrate_continuous: requires t_end >= 0");
  }
  const double dt = cfg.gamma;
  long total = static_cast<long>(std::ceil(t_end / dt - 1e-12));
  if (total > cfg.max_steps) total = cfg.max_steps;

  auto eval_field = [&](const Vector& y) -> Vector {
    if (field == FieldKind::Modified) {
      return modified_field(P, cfg.scaling, cfg.lambda, y);
    }
    return nominal_field(P, cfg.sigma, cfg.lambda, y);
  };

  Trace trace;
  Vector x = x0;
  double initial_rn = -1.0;
  for (long step = 0; step <= total; ++step) {
    Vector t = fb_map(P, cfg.lambda, x);
    Vector r = x - t;
    double rn = r.norm();
    double coeff = scaling_coefficient(cfg.scaling, rn, residual_guard(x));
    double phi_value = field == FieldKind::Modified ? coeff : nan_double();
    trace.rows.push_back(
        make_row(step, step * dt, rn, phi_value, x, x_star, cfg.record_iterates));
    if (step == 0) initial_rn = rn;
    if (rn <= cfg.tol) {
      trace.terminal_status = TerminalStatus::Converged;
      return trace;
    }
    if (rn > kDivergenceFactor * std::max(initial_rn, 1.0)) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
    if (step == total) break;
    // k1 reuses the residual already computed at x.
    Vector k1 = field == FieldKind::Modified
                    ? (coeff == 0.0 ? Vector(Vector::Zero(x.size()))
                                    : Vector(-coeff * r))
                    : Vector(-cfg.sigma * r);
    Vector k2 = eval_field(x + (0.5 * dt) * k1);
    Vector k3 = eval_field(x + (0.5 * dt) * k2);
    Vector k4 = eval_field(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      trace.terminal_status = TerminalStatus::Diverged;
      return trace;
    }
  }
  trace.terminal_status = TerminalStatus::MaxSteps;
  return trace;
}

std::optional<double> empirical_settling_time(const Trace& trace, double eps) {
  if (trace.rows.empty()) return std::nullopt;
  std::size_t idx = trace.rows.size();
  for (std::size_t i = trace.rows.size(); i-- > 0;) {
    double d = trace.rows[i].distance_to_solution;
    if (std::isnan(d) || d > eps) break;
    idx = i;
  }
  if (idx == trace.rows.size()) return std::nullopt;
  return trace.rows[idx].time;
}

bool discrete_consistency_holds(const ProblemInstance& P, double lambda,
                                const ScalingParams& scaling, double nu,
                                double eps, const Vector& x0,
                                const Vector& x_star, double delta,
                                double gamma) {
  SettlingBound bound = build_bound(delta, scaling, nu, std::nullopt, gamma);
  long n_star = *bound.n_star;
  Vector x = x0;
  for (long n = 0; n <= 2 * n_star; ++n) {
    double dist = (x - x_star).norm();
    if (n <= n_star) {
      EnvelopeResult env =
          discrete_envelope(bound.r, bound.s, nu, gamma, bound.rho, n);
      if (!(dist < env.value + eps)) return false;
    } else if (!(dist < eps)) {
      return false;
    }
    Vector r = residual(P, lambda, x);
    double coeff = scaling_coefficient(scaling, r.norm(), residual_guard(x));
    x -= (gamma * coeff) * r;
    if (!x.allFinite()) return false;
  }
  return true;
}

double find_consistent_gamma(const ProblemInstance& P, double lambda,
                             const ScalingParams& scaling, double nu, double eps,
                             const Vector& x0, const Vector& x_star, double delta,
                             double gamma_hi, int bisect_iters) {
  if (!(gamma_hi > 0.0)) {
    throw InputError("find_consistent_gamma: requires gamma_hi > 0");
  }
  auto holds = [&](double g) {
    return discrete_consistency_holds(P, lambda, scaling, nu, eps, x0, x_star,
                                      delta, g);
  };
  double gamma = gamma_hi;
  int halvings = 0;
  while (!holds(gamma)) {
    gamma *= 0.5;
    if (++halvings > 80) {
      throw NonConvergenceError(
          "find_consistent_gamma: no consistent step size found", gamma);
    }
  }
  if (halvings == 0) return gamma;  // gamma_hi itself is consistent
  double lo = gamma, hi = 2.0 * gamma;
  for (int i = 0; i < bisect_iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << trace_to_csv(trace);
}

std::string trace_to_csv(const Trace& trace) {
  std::string out = "step,time,residual_norm,lyapunov,phi,distance_to_solution";
  Eigen::Index iter_dim =
      trace.rows.empty() ? 0 : trace.rows.front().iterate.size();
  for (Eigen::Index i = 0; i < iter_dim; ++i) {
    out += ",x" + std::to_string(i);
  }
  out += "\n";
  char buf[40];
  for (const TraceRow& row : trace.rows) {
    std::snprintf(buf, sizeof(buf), "%ld", row.step);
    out += buf;
    out += ',';
    append_field(out, row.time);
    out += ',';
    append_field(out, row.residual_norm);
    out += ',';
    append_field(out, row.lyapunov);
    out += ',';
    append_field(out, row.phi);
    out += ',';
    append_field(out, row.distance_to_solution);
    for (Eigen::Index i = 0; i < row.iterate.size(); ++i) {
      out += ',';
      append_field(out, row.iterate[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace fbs
