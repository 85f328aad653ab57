// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "fbs/dynamics.hpp"
#include "fbs/problems.hpp"
#include "oracles.hpp"

using namespace fbs;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s criterion %d - %s: %s\n", pass ? "PASS" : "FAIL", id, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

__attribute__((format(printf, 1, 2)))
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return std::string(buf);
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix e2_matrix() {
  Matrix M(2, 2);
  M << 1.0, -0.5, 0.5, 1.0;
  return M;
}

ProblemInstance e2_instance() {
  return ProblemInstance(MaximalOperatorSpec::zero(),
                         ForwardOperatorSpec::affine(e2_matrix(), Vector::Zero(2)),
                         2);
}

const double kLambdaE2 = 0.8;
const ScalingParams kNu4Scaling(1.0, 1.0, 0.5, 1.5);  // kappa(nu = 4)

double e2_delta() {
  double tau = contraction_factor(0.0, 1.0, std::sqrt(1.25), kLambdaE2);
  return working_delta(tau, 1e-3);
}

// ---------------------------------------------------------------------------

void criterion_1_contraction() {
  ProblemInstance E2 = e2_instance();
  double tau = contraction_factor(0.0, 1.0, std::sqrt(1.25), kLambdaE2);
  bool formula_ok = std::abs(tau - std::sqrt(0.2)) <= 1e-14;
  double measured = oracles::sampled_lipschitz(
      [&](const Vector& x) { return fb_map(E2, kLambdaE2, x); }, 2, 10000, 2024);
  bool pass = formula_ok && measured <= std::sqrt(0.2) + 1e-8;
  report(1, "contraction reproduction", pass,
         fmt("tau = %.12f, measured Lipschitz ratio over 1e4 pairs = %.12f",
             tau, measured));
}

void criterion_2_unique_solutions() {
  struct Case {
    const char* branch;
    ProblemInstance instance;
    double mu_A, mu_B, L, lambda;
    Vector oracle;
  };
  // B1: A = 0, B = Mx + q; oracle solves Mx = -q.
  Vector q1 = vec2(-1.0, 0.5);
  Vector oracle1 = e2_matrix().partialPivLu().solve(-q1);
  // B2: A = 2 Id, B = -Id + q declared (mu_B, L) = (-2, 1); (A+B) = Id.
  Vector q2 = vec2(1.0, -1.0);
  // B3: A = 6 Id, B = -5 Id + q declared (mu_B, L) = (-7, 5); (A+B) = Id.
  Vector q3 = vec2(2.0, 1.0);

  std::vector<Case> cases;
  cases.push_back({"B1",
                   ProblemInstance(MaximalOperatorSpec::zero(),
                                   ForwardOperatorSpec::affine(e2_matrix(), q1),
                                   2),
                   0.0, 1.0, std::sqrt(1.25), 0.8, oracle1});
  cases.push_back(
      {"B2",
       ProblemInstance(MaximalOperatorSpec::scaled_identity(2.0),
                       ForwardOperatorSpec::affine(-Matrix::Identity(2, 2), q2)
                           .with_moduli(-2.0, 1.0),
                       2),
       2.0, -2.0, 1.0, 1.0, -q2});
  cases.push_back(
      {"B3",
       ProblemInstance(MaximalOperatorSpec::scaled_identity(6.0),
                       ForwardOperatorSpec::affine(-5.0 * Matrix::Identity(2, 2),
                                                   q3)
                           .with_moduli(-7.0, 5.0),
                       2),
       6.0, -7.0, 5.0, 0.5, -q3});

  bool pass = true;
  std::string detail;
  for (const Case& c : cases) {
    Branch branch = classify(c.mu_A, c.mu_B, c.L);
    bool branch_ok = std::string(to_string(branch)) == c.branch;
    bool feasible = check_assumption_A(c.mu_A, c.mu_B, c.L, c.lambda);
    SolutionCertificate cert =
        solve_fixed_point(c.instance, c.lambda, vec2(3.0, 3.0), 1e-11, 500000);
    double res = residual(c.instance, c.lambda, cert.x_star).norm();
    double agree = (cert.x_star - c.oracle).norm();
    bool ok = branch_ok && feasible && res <= 1e-10 && agree <= 1e-8;
    pass = pass && ok;
    detail += fmt("%s[res %.1e, |x*-oracle| %.1e] ", c.branch, res, agree);
  }
  report(2, "unique-solution certification per branch", pass, detail);
}

struct FixedTimeRuns {
  std::vector<Trace> traces;  // one per radius, kept for criterion 5
  std::vector<double> settle_times;
  double t_max = 0.0;
  SettlingBound bound;
  bool all_converged = true;
  double seconds = 0.0;
};

FixedTimeRuns run_modified_protocol() {
  FixedTimeRuns out;
  ProblemInstance E2 = e2_instance();
  out.bound = build_bound(e2_delta(), kNu4Scaling, 4.0);
  out.t_max = out.bound.t_max_general;
  Vector xs = Vector::Zero(2);

  SolverConfig cfg;
  cfg.lambda = kLambdaE2;
  cfg.scaling = kNu4Scaling;
  cfg.gamma = 1e-4;  // RK4 dt
  cfg.tol = 1e-9;
  cfg.max_steps = 100000000;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto t0 = std::chrono::steady_clock::now();
  for (double radius : {1e-2, 1.0, 1e2, 1e4, 1e6}) {
    Vector u = vec2(gauss(rng), gauss(rng)).normalized();
    Trace tr = integrate_continuous(E2, cfg, FieldKind::Modified, radius * u,
                                    1.5 * out.t_max, &xs);
    out.all_converged =
        out.all_converged && tr.terminal_status == TerminalStatus::Converged;
    out.settle_times.push_back(tr.rows.back().time);
    out.traces.push_back(std::move(tr));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0).count();
  return out;
}

void criterion_3_fixed_time(const FixedTimeRuns& runs) {
  bool within = runs.all_converged;
  double worst = 0.0;
  for (double t : runs.settle_times) {
    worst = std::max(worst, t);
    within = within && t <= runs.t_max;
  }
  double spread = *std::max_element(runs.settle_times.begin(),
                                    runs.settle_times.end()) -
                  *std::min_element(runs.settle_times.begin(),
                                    runs.settle_times.end());
  bool pass = within && spread <= runs.t_max && runs.seconds < 60.0;
  report(3, "fixed-time settling under T_max", pass,
         fmt("T_max %.4f, settle times [%.4f %.4f %.4f %.4f %.4f], spread %.4f, "
             "runtime %.1fs",
             runs.t_max, runs.settle_times[0], runs.settle_times[1],
             runs.settle_times[2], runs.settle_times[3], runs.settle_times[4],
             spread, runs.seconds));
}

void criterion_4_exponential_contrast() {
  ProblemInstance E2 = e2_instance();
  Vector xs = Vector::Zero(2);
  SolverConfig cfg;
  cfg.lambda = kLambdaE2;
  cfg.sigma = 1.0;
  cfg.gamma = 1e-4;
  cfg.tol = 1e-9;
  cfg.max_steps = 100000000;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> times;
  bool converged = true;
  for (double radius : {1e-2, 1.0, 1e2, 1e4, 1e6}) {
    Vector u = vec2(gauss(rng), gauss(rng)).normalized();
    Trace tr = integrate_continuous(E2, cfg, FieldKind::Nominal, radius * u,
                                    200.0, &xs);
    converged = converged && tr.terminal_status == TerminalStatus::Converged;
    times.push_back(tr.rows.back().time);
  }
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    monotone = monotone && times[i] < times[i + 1];
  }
  report(4, "nominal settling grows with log(radius)", converged && monotone,
         fmt("settle times [%.3f %.3f %.3f %.3f %.3f]", times[0], times[1],
             times[2], times[3], times[4]));
}

void criterion_5_lyapunov(const FixedTimeRuns& runs) {
  ProblemInstance E2 = e2_instance();
  Vector xs = Vector::Zero(2);
  const SettlingBound& b = runs.bound;
  double worst = -std::numeric_limits<double>::infinity();
  long checked = 0;

  auto check_trace = [&](const Trace& tr, double dt) {
    for (std::size_t i = 0; i + 1 < tr.rows.size(); ++i) {
      double v = tr.rows[i].lyapunov;
      if (!(v > 1e-16)) continue;
      double fd = (tr.rows[i + 1].lyapunov - v) / dt;
      double rhs = b.p1 * std::pow(v, b.alpha1) + b.p2 * std::pow(v, b.alpha2);
      double tol = 1e-3 * (1.0 + std::abs(fd));
      worst = std::max(worst, fd + rhs - tol);
      ++checked;
    }
  };

  for (const Trace& tr : runs.traces) check_trace(tr, 1e-4);  // 5 trajectories

  SolverConfig cfg;  // 5 more from fresh radii/directions
  cfg.lambda = kLambdaE2;
  cfg.scaling = kNu4Scaling;
  cfg.gamma = 1e-4;
  cfg.tol = 1e-9;
  cfg.max_steps = 100000000;
  std::mt19937_64 rng(99);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double radius : {0.5, 3.0, 30.0, 300.0, 3000.0}) {
    Vector u = vec2(gauss(rng), gauss(rng)).normalized();
    Trace tr = integrate_continuous(E2, cfg, FieldKind::Modified, radius * u,
                                    1.5 * runs.t_max, &xs);
    check_trace(tr, 1e-4);
  }

  report(5, "Lyapunov decrease inequality along 10 trajectories", worst <= 0.0,
         fmt("%ld steps checked, worst slack %.3e", checked, worst));
}

void criterion_6_discrete_consistency() {
  struct Inst {
    const char* name;
    ProblemInstance instance;
    double lambda;
    Vector x_star;
    Vector x0;
  };
  Vector off = vec2(-2.0, -2.0);
  std::vector<Inst> insts;
  insts.push_back({"E2", e2_instance(), kLambdaE2, Vector::Zero(2),
                   vec2(8.0, -6.0)});
  insts.push_back({"VI",
                   ProblemInstance(MaximalOperatorSpec::normal_cone(
                                       ConvexSetSpec::box(Vector::Zero(2),
                                                          Vector::Ones(2))),
                                   ForwardOperatorSpec::affine(
                                       Matrix::Identity(2, 2), off),
                                   2),
                   1.0, Vector::Ones(2), vec2(7.0, -7.0)});

  bool pass = true;
  std::string detail;
  for (const Inst& inst : insts) {
    double tau = contraction_factor(inst.instance.A.mu(), inst.instance.B.mu(),
                                    inst.instance.B.lipschitz(), inst.lambda);
    double delta = working_delta(tau, 1e-3);
    double gamma = find_consistent_gamma(inst.instance, inst.lambda, kNu4Scaling,
                                         4.0, 1e-6, inst.x0, inst.x_star, delta,
                                         0.5, 30);
    SettlingBound b = build_bound(delta, kNu4Scaling, 4.0, std::nullopt, gamma);
    long n_star = *b.n_star;

    // explicit re-check of both halves of the property at the found gamma
    Vector x = inst.x0;
    double worst_env = -std::numeric_limits<double>::infinity();
    double worst_tail = -std::numeric_limits<double>::infinity();
    for (long n = 0; n <= 2 * n_star; ++n) {
      double dist = (x - inst.x_star).norm();
      if (n <= n_star) {
        double env = discrete_envelope(b.r, b.s, 4.0, gamma, b.rho, n).value;
        if (std::isfinite(env)) worst_env = std::max(worst_env, dist - env);
      } else {
        worst_tail = std::max(worst_tail, dist);
      }
      Vector r = residual(inst.instance, inst.lambda, x);
      x -= gamma * scaling_coefficient(kNu4Scaling, r.norm(), residual_guard(x)) *
           r;
    }
    bool ok = worst_env < 1e-6 && worst_tail < 1e-6;
    pass = pass && ok;
    detail += fmt("%s[gamma* %.2e, n* %ld, env slack %.2e, tail %.2e] ",
                  inst.name, gamma, n_star, worst_env, worst_tail);
  }
  report(6, "discrete consistency with the tan-envelope", pass, detail);
}

void criterion_7_banach_reduction() {
  ProblemInstance E2 = e2_instance();
  Vector x0 = vec2(5.0, 2.0);
  Trace tr =
      euler_nominal(E2, 1.0, 1.0, kLambdaE2, x0, 1e-300, 100, nullptr, true);
  bool pass = tr.rows.size() == 101;
  Vector x = x0;
  for (long k = 0; k <= 100 && pass; ++k) {
    const Vector& it = tr.rows[static_cast<std::size_t>(k)].iterate;
    pass = it.size() == 2 && it[0] == x[0] && it[1] == x[1];  // bitwise
    x = fb_map(E2, kLambdaE2, x);
  }
  report(7, "euler_nominal at gamma*sigma = 1 is bitwise Banach", pass,
         pass ? "100 iterates bitwise identical" : "iterate mismatch");
}

void criterion_8_application_parity() {
  CopSpec cop{FunctionSpec::quadratic(Matrix::Identity(2, 2), vec2(2.0, 2.0)),
              FunctionSpec::indicator(
                  ConvexSetSpec::box(Vector::Zero(2), Vector::Ones(2)))};
  ViSpec vi{ForwardOperatorSpec::affine(Matrix::Identity(2, 2), vec2(-2.0, -2.0)),
            ConvexSetSpec::box(Vector::Zero(2), Vector::Ones(2))};
  ProblemInstance pcop = cop_to_inclusion(cop).instance;
  ProblemInstance pvi = vi_to_inclusion(vi).instance;
  double lambda = 1.0;
  SolutionCertificate ccop =
      solve_fixed_point(pcop, lambda, vec2(0.3, 0.7), 1e-12);
  SolutionCertificate cvi = solve_fixed_point(pvi, lambda, vec2(0.3, 0.7), 1e-12);

  Vector oracle = oracles::projected_gradient(
      [&](const Vector& x) { return cop.f.gradient(x); },
      [&](const Vector& x) { return project(cop.g.indicator_set(), x); },
      vec2(0.0, 0.0), 0.5, 100000, 1e-15);

  double dev_pair = (ccop.x_star - cvi.x_star).norm();
  double dev_corner = (ccop.x_star - Vector::Ones(2)).norm();
  double dev_oracle = (ccop.x_star - oracle).norm();
  bool pass = dev_pair <= 1e-10 && dev_corner <= 1e-10 && dev_oracle <= 1e-10;
  report(8, "COP and VI adapters agree at (1,1)", pass,
         fmt("|cop-vi| %.1e, |cop-(1,1)| %.1e, |cop-oracle| %.1e", dev_pair,
             dev_corner, dev_oracle));
}

void criterion_9_feasibility_gate() {
  LambdaInterval itv = feasible_interval(0.0, 1.0, 1.0);
  bool interval_ok = itv.lo == 0.0 && std::abs(itv.hi - 2.0) <= 1e-15;
  long disagreements = 0;
  const int grid = 1000;
  for (int i = 1; i <= grid; ++i) {
    double lambda = 4.0 * i / grid;  // spans (0, 4], hits 2.0 exactly
    bool inside = itv.contains(lambda);
    bool holds = check_assumption_A(0.0, 1.0, 1.0, lambda);
    if (inside != holds) ++disagreements;
  }
  report(9, "feasibility gate on the (0,1,1) instance",
         interval_ok && disagreements == 0,
         fmt("interval (0, %.1f), %ld/%d grid disagreements", itv.hi,
             disagreements, grid));
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion_1_contraction();
  criterion_2_unique_solutions();
  FixedTimeRuns runs = run_modified_protocol();
  criterion_3_fixed_time(runs);
  criterion_4_exponential_contrast();
  criterion_5_lyapunov(runs);
  criterion_6_discrete_consistency();
  criterion_7_banach_reduction();
  criterion_8_application_parity();
  criterion_9_feasibility_gate();
  double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%s: %d criterion(s) failed, total runtime %.1fs\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures, total);
  return g_failures == 0 ? 0 : 1;
}
