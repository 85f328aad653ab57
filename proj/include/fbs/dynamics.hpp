#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fbs/fb_core.hpp"
#include "fbs/feasibility.hpp"
#include "fbs/settling.hpp"

namespace fbs {

enum class TerminalStatus { Converged, MaxSteps, Diverged };
const char* to_string(TerminalStatus s);

enum class IntegratorKind { Euler, Rk4 };
enum class FieldKind { Nominal, Modified };

struct SolverConfig {
  double lambda = 1.0;
  double sigma = 1.0;  // nominal gain
  ScalingParams scaling;
  double gamma = 1e-2;  // time step
  double tol = 1e-9;    // residual stopping threshold
  long max_steps = 100000;
  IntegratorKind integrator = IntegratorKind::Euler;
  bool record_iterates = false;
};

// One recorded step. lyapunov / distance_to_solution are NaN when no solution
// certificate was supplied; iterate is empty unless recording was requested.
struct TraceRow {
  long step = 0;
  double time = 0.0;
  double residual_norm = 0.0;
  double lyapunov = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double distance_to_solution = std::numeric_limits<double>::quiet_NaN();
  Vector iterate;
};

struct Trace {
  std::vector<TraceRow> rows;
  TerminalStatus terminal_status = TerminalStatus::MaxSteps;
  std::vector<std::string> warnings;

  const TraceRow& back() const { return rows.back(); }
};

struct SolutionCertificate {
  Vector x_star;
  double residual_norm = 0.0;
  long iterations = 0;
};

// Banach iteration x_{k+1} = T(x_k) until ||x_k - T(x_k)|| <= tol.
// Requires assumption (A) for convergence; throws NonConvergenceError with the
// last residual if the budget runs out.
SolutionCertificate solve_fixed_point(const ProblemInstance& P, double lambda,
                                      const Vector& x0, double tol,
                                      long max_iterations = 200000);

// Forward-Euler discretization of the modified system:
// x_{n+1} = x_n - gamma phi(x_n) (x_n - T(x_n)), evaluated in fused form.
Trace euler_modified(const ProblemInstance& P, const SolverConfig& cfg,
                     const Vector& x0, const Vector* x_star = nullptr);

// Relaxed forward-backward iteration x_{n+1} = x_n - gamma sigma (x_n - T(x_n)).
// gamma*sigma == 1 runs the exact solve_fixed_point recursion (bitwise).
// gamma*sigma outside (0, 2/(1+delta)) records a warning on the trace.
Trace euler_nominal(const ProblemInstance& P, double sigma, double gamma,
                    double lambda, const Vector& x0, double tol, long max_steps,
                    const Vector* x_star = nullptr, bool record_iterates = false);

// Classical fixed-step RK4 on the nominal or modified field; dt = cfg.gamma,
// records every step, stops on residual <= tol / divergence / t_end.
Trace integrate_continuous(const ProblemInstance& P, const SolverConfig& cfg,
                           FieldKind field, const Vector& x0, double t_end,
                           const Vector* x_star = nullptr);

// First recorded time after which distance_to_solution stays <= eps; nullopt
// if the trace never settles (or lacks distance data).
std::optional<double> empirical_settling_time(const Trace& trace, double eps);

// Largest gamma in (0, gamma_hi] (up to bisection resolution) for which the
// forward-Euler iterates obey the discrete consistency property:
// ||x_n - x*|| < envelope(n) + eps for n <= n*, and < eps for n* < n <= 2 n*.
double find_consistent_gamma(const ProblemInstance& P, double lambda,
                             const ScalingParams& scaling, double nu,
                             double eps, const Vector& x0, const Vector& x_star,
                             double delta, double gamma_hi, int bisect_iters = 40);

// Check the discrete consistency property at a fixed gamma (used by the
// bisection and the verify suite).
bool discrete_consistency_holds(const ProblemInstance& P, double lambda,
                                const ScalingParams& scaling, double nu,
                                double eps, const Vector& x0,
                                const Vector& x_star, double delta,
                                double gamma);

// CSV with the exact column order
// step,time,residual_norm,lyapunov,phi,distance_to_solution; NaN optional
// values emit empty fields; iterate components append as x0,x1,... when
// recorded.
void write_trace_csv(std::ostream& os, const Trace& trace);
std::string trace_to_csv(const Trace& trace);

}  // namespace fbs
