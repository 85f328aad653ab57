#include "fbs/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fbs {

namespace {

Vector random_in_cube(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::uniform_real_distribution<double> unif(-radius, radius);
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = unif(rng);
  return x;
}

Vector random_direction(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector u(dim);
  double n = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) u[i] = gauss(rng);
    n = u.norm();
  } while (n < 1e-12);
  return u / n;
}

InvariantResult make_entry(const std::string& name, long samples,
                           double max_violation, double tolerance,
                           const std::string& note = "") {
  InvariantResult e;
  e.name = name;
  e.samples = samples;
  e.max_violation = max_violation;
  e.pass = max_violation <= tolerance;
  e.note = note;
  return e;
}

InvariantResult failed_entry(const std::string& name, const std::string& why) {
  InvariantResult e;
  e.name = name;
  e.pass = false;
  e.max_violation = std::numeric_limits<double>::infinity();
  e.note = why;
  return e;
}

struct BoundContext {
  double tau = 0.0;
  double delta = 0.0;
  SettlingBound bound;
  double nu_eff = 0.0;
};

// Feasible sample inside a set: rejection sampling inside the bounding box of
// bounded sets, projection fallback for unbounded ones.
Vector feasible_sample(const ConvexSetSpec& C, std::mt19937_64& rng,
                       double radius) {
  const int kMaxTries = 64;
  if (C.kind() == ConvexSetSpec::Kind::Box) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    Vector x(C.dim());
    for (Eigen::Index i = 0; i < C.dim(); ++i) {
      x[i] = C.box_lower()[i] +
             u01(rng) * (C.box_upper()[i] - C.box_lower()[i]);
    }
    return x;
  }
  if (C.kind() == ConvexSetSpec::Kind::Ball) {
    for (int t = 0; t < kMaxTries; ++t) {
      Vector x = C.ball_center() +
                 random_in_cube(rng, C.dim(), std::max(C.ball_radius(), 1e-12));
      if (C.contains(x)) return x;
    }
  }
  return project(C, random_in_cube(rng, C.dim(), radius));
}

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const InvariantResult& e) { return e.pass; });
}

VerifyReport run_verify(const ProblemInstance& P, double lambda,
                        const ScalingParams& scaling, std::optional<double> nu,
                        double delta_floor, const VerifySettings& settings,
                        const SourceSpec& source) {
  VerifyReport report;
  std::mt19937_64 rng(settings.seed);
  const Eigen::Index dim = P.dim;
  const double mu_A = P.A.mu();
  const double mu_B = P.B.mu();
  const double L = P.B.lipschitz();

  // ---- gate: the parameter regime itself -------------------------------
  bool feasible = false;
  LambdaInterval interval;
  {
    InvariantResult gate;
    gate.name = "assumption_A_gate";
    gate.samples = 1;
    try {
      Branch branch = classify(mu_A, mu_B, L);
      if (branch == Branch::Infeasible) {
        gate = failed_entry(gate.name, "spec is infeasible (no valid lambda)");
      } else {
        interval = feasible_interval(mu_A, mu_B, L);
        feasible = interval.contains(lambda) &&
                   check_assumption_A(mu_A, mu_B, L, lambda);
        gate.pass = feasible;
        std::ostringstream os;
        os << "branch " << to_string(branch) << ", interval (" << interval.lo
           << ", " << interval.hi << ")";
        gate.note = os.str();
        if (!feasible) gate.max_violation = 1.0;
      }
    } catch (const Error& err) {
      gate = failed_entry(gate.name, err.what());
    }
    report.entries.push_back(gate);
  }

  // ---- operators --------------------------------------------------------
  if (feasible) {
    double worst = 0.0;
    double coco = 1.0 + lambda * mu_A;
    for (int k = 0; k < settings.operator_samples; ++k) {
      Vector x = random_in_cube(rng, dim, settings.sample_radius);
      Vector y = random_in_cube(rng, dim, settings.sample_radius);
      Vector jx = resolvent(P.A, lambda, x);
      Vector jy = resolvent(P.A, lambda, y);
      Vector dj = jx - jy;
      double lhs = dj.dot(x - y);
      double rhs = coco * dj.squaredNorm();
      double scale = std::max(1.0, (x - y).squaredNorm());
      worst = std::max(worst, (rhs - lhs) / scale);
    }
    report.entries.push_back(make_entry("resolvent_cocoercivity",
                                        settings.operator_samples, worst, 1e-10));
  }

  if (P.A.source_function()) {
    const FunctionSpec& f = *P.A.source_function();
    double worst = 0.0;
    std::uniform_real_distribution<double> mag(-4.0, 0.0);
    for (int k = 0; k < settings.operator_samples; ++k) {
      Vector y = random_in_cube(rng, dim, settings.sample_radius);
      Vector p = prox(f, lambda, y);
      double fp = f.value(p);
      double base = fp + p.squaredNorm() / (2.0 * lambda) -
                    p.dot(y) / lambda;  // constant ||y||^2 term cancels below
      Vector d = std::pow(10.0, mag(rng)) * random_direction(rng, dim);
      Vector q = p + d;
      double fq = f.value(q);
      if (!std::isfinite(fq)) continue;  // indicator: perturbed point left C
      double other = fq + q.squaredNorm() / (2.0 * lambda) - q.dot(y) / lambda;
      worst = std::max(worst, base - other);
    }
    report.entries.push_back(make_entry("prox_optimality",
                                        settings.operator_samples, worst, 1e-10));
  }

  if (P.A.source_set()) {
    const ConvexSetSpec& C = *P.A.source_set();
    double worst = 0.0;
    for (int k = 0; k < settings.operator_samples; ++k) {
      Vector y = random_in_cube(rng, dim, settings.sample_radius);
      Vector p = project(C, y);
      double drift = (project(C, p) - p).norm() / (1.0 + p.norm());
      worst = std::max(worst, drift);
    }
    report.entries.push_back(make_entry(
        "projection_idempotence", settings.operator_samples, worst, 1e-14));
  }

  {
    double worst_mono = 0.0;
    double worst_lip = 0.0;
    for (int k = 0; k < settings.operator_samples; ++k) {
      Vector x = random_in_cube(rng, dim, settings.sample_radius);
      Vector y = random_in_cube(rng, dim, settings.sample_radius);
      Vector d = x - y;
      double dn = d.norm();
      if (dn < 1e-12) continue;
      Vector db = evaluate_forward(P.B, x) - evaluate_forward(P.B, y);
      double scale = std::max(1.0, dn * dn);
      worst_mono = std::max(worst_mono, (mu_B * dn * dn - db.dot(d)) / scale);
      worst_lip = std::max(worst_lip, (db.norm() - L * dn) / std::max(1.0, dn));
    }
    report.entries.push_back(make_entry(
        "forward_monotonicity", settings.operator_samples, worst_mono, 1e-10));
    report.entries.push_back(make_entry(
        "forward_lipschitz", settings.operator_samples, worst_lip, 1e-10));
  }

  // ---- feasibility ------------------------------------------------------
  if (feasible) {
    long disagreements = 0;
    std::uniform_real_distribution<double> u01(1e-9, 1.0 - 1e-9);
    double hi_sample =
        interval.unbounded() ? std::max(10.0 * (interval.lo + 1.0), 1e4)
                             : interval.hi;
    for (int k = 0; k < settings.interval_samples; ++k) {
      double margin = 1e-7 * (hi_sample - interval.lo);
      double l = interval.lo + margin +
                 u01(rng) * (hi_sample - interval.lo - 2.0 * margin);
      if (!check_assumption_A(mu_A, mu_B, L, l)) ++disagreements;
    }
    for (int k = 0; k < settings.interval_samples; ++k) {
      // Positive lambda outside the interval, when such lambda exist.
      double l = -1.0;
      if (interval.lo > 0.0 && (k % 2 == 0 || !std::isfinite(interval.hi))) {
        l = interval.lo * (1.0 - 1e-7) * u01(rng);
      } else if (std::isfinite(interval.hi)) {
        l = interval.hi * (1.0 + 1e-7) + u01(rng) * interval.hi;
      }
      if (l <= 0.0) continue;
      if (check_assumption_A(mu_A, mu_B, L, l)) ++disagreements;
    }
    report.entries.push_back(make_entry("interval_correctness",
                                        2L * settings.interval_samples,
                                        static_cast<double>(disagreements), 0.0));
  }

  BoundContext ctx;
  bool have_bound = false;
  if (feasible) {
    ctx.tau = contraction_factor(mu_A, mu_B, L, lambda);

    double worst = 0.0;
    for (int k = 0; k < settings.contraction_pairs; ++k) {
      Vector x = random_in_cube(rng, dim, settings.sample_radius);
      Vector y = random_in_cube(rng, dim, settings.sample_radius);
      double dn = (x - y).norm();
      if (dn < 1e-12) continue;
      double tn = (fb_map(P, lambda, x) - fb_map(P, lambda, y)).norm();
      worst = std::max(worst, tn - ctx.tau * dn * (1.0 + 1e-8));
    }
    report.entries.push_back(make_entry("empirical_contraction",
                                        settings.contraction_pairs, worst, 0.0));
  }

  {
    double worst = 0.0;
    std::uniform_real_distribution<double> u01(0.01, 0.99);
    int n = 500;
    for (int k = 0; k < n; ++k) {
      double d = u01(rng);
      double eps = epsilon_of_delta(d);
      double lo = std::max(0.0, 1.0 - eps);
      std::uniform_real_distribution<double> gsel(lo + 1e-9, 1.0 - 1e-9);
      double g1 = gsel(rng);
      double ratio = (1.0 - d) / (1.0 + d);
      worst = std::max(worst, d - std::pow(ratio, 1.0 - g1));
      std::uniform_real_distribution<double> gbig(1.0 + 1e-9, 25.0);
      double g2 = gbig(rng);
      worst = std::max(worst, d - std::pow(ratio, 1.0 - g2));
    }
    report.entries.push_back(
        make_entry("window_ratio_inequality", 2L * n, worst, 0.0));
  }

  {
    // classify() against a brute-force lambda witness search.
    long mismatches = 0;
    long total = 0;
    std::vector<double> grid = {-8.0, -5.0, -2.0, -1.0, -0.5, 0.0,
                                0.5,  1.0,  2.0,  5.0,  8.0};
    for (double a : grid) {
      for (double b : grid) {
        for (double l : {0.0, 0.5, 1.0, 3.0, 9.0}) {
          if (b > l) continue;  // invalid spec by Cauchy-Schwarz
          ++total;
          Branch br = classify(a, b, l);
          bool witness = false;
          for (double lam = 1e-6; lam < 1e6; lam *= 1.35) {
            if (check_assumption_A(a, b, l, lam)) {
              witness = true;
              break;
            }
          }
          if (witness && br == Branch::Infeasible) ++mismatches;
          if (!witness && br != Branch::Infeasible) {
            // The interval may be too narrow for the coarse grid; test its
            // midpoint directly before calling it a mismatch.
            LambdaInterval itv = feasible_interval(a, b, l);
            double mid = std::isfinite(itv.hi) ? 0.5 * (itv.lo + itv.hi)
                                               : itv.lo + 1.0;
            if (!check_assumption_A(a, b, l, mid)) ++mismatches;
          }
        }
      }
    }
    report.entries.push_back(make_entry("trichotomy_exhaustiveness", total,
                                        static_cast<double>(mismatches), 0.0));
  }

  // ---- fb_core (needs the solution certificate) -------------------------
  std::optional<SolutionCertificate> cert;
  if (feasible) {
    try {
      cert = solve_fixed_point(P, lambda, Vector::Zero(dim), 1e-12, 500000);
    } catch (const Error& err) {
      report.entries.push_back(failed_entry("solution_certificate", err.what()));
    }
  }

  if (cert) {
    const Vector& xs = cert->x_star;
    double delta_for_checks = working_delta(ctx.tau, delta_floor);
    bool delta_ok = delta_for_checks > 0.0 && delta_for_checks < 1.0;

    {
      long mismatches = 0;
      for (int k = 0; k < settings.field_samples; ++k) {
        Vector x = k == 0 ? xs : Vector(xs + random_in_cube(rng, dim,
                                                            settings.sample_radius));
        double guard = residual_guard(x);
        double rn = residual(P, lambda, x).norm();
        bool fixed = rn <= guard;
        bool mod_zero = modified_field(P, scaling, lambda, x).norm() == 0.0;
        // The nominal field scales the residual, so "equilibrium" reads as
        // staying within the guard band.
        bool nom_zero = nominal_field(P, 1.0, lambda, x).norm() <= guard;
        double ph = phi(P, scaling, lambda, x);
        if (mod_zero != fixed || (ph == 0.0) != fixed || nom_zero != fixed) {
          ++mismatches;
        }
      }
      report.entries.push_back(make_entry("equilibrium_equivalence",
                                          settings.field_samples,
                                          static_cast<double>(mismatches), 0.0));
    }

    if (delta_ok) {
      double worst_acute = 0.0;
      double worst_sandwich = 0.0;
      double d = delta_for_checks;
      for (int k = 0; k < settings.field_samples; ++k) {
        Vector x = xs + random_in_cube(rng, dim, settings.sample_radius);
        double dist = (x - xs).norm();
        if (dist < 1e-12) continue;
        Vector r = residual(P, lambda, x);
        worst_acute =
            std::max(worst_acute, (1.0 - d) * dist * dist - (x - xs).dot(r));
        double rn = r.norm();
        worst_sandwich = std::max(worst_sandwich, (1.0 - d) * dist - rn);
        worst_sandwich = std::max(worst_sandwich, rn - (1.0 + d) * dist);
      }
      report.entries.push_back(make_entry("acute_angle", settings.field_samples,
                                          worst_acute, 1e-8));
      report.entries.push_back(make_entry("residual_sandwich",
                                          settings.field_samples, worst_sandwich,
                                          1e-8));
    }

    {
      // ||modified_field|| <= c1 ||r||^k1 + c2 ||r||^k2 and decays to zero
      // along a geometric approach to the solution.
      Vector u = random_direction(rng, dim);
      double worst = 0.0;
      double first_mag = -1.0;
      double last_mag = 0.0;
      double prev_mag = std::numeric_limits<double>::infinity();
      int count = 0;
      for (double t = 1.0; t >= 1e-12; t *= 1e-2, ++count) {
        Vector x = xs + t * u;
        Vector field = modified_field(P, scaling, lambda, x);
        double rn = residual(P, lambda, x).norm();
        double cap = scaling.c1 * std::pow(rn, scaling.kappa1) +
                     scaling.c2 * std::pow(rn, scaling.kappa2);
        last_mag = field.norm();
        if (first_mag < 0.0) first_mag = last_mag;
        worst = std::max(worst, last_mag - cap * (1.0 + 1e-9));
        worst = std::max(worst, last_mag - prev_mag * (1.0 + 1e-12));
        prev_mag = last_mag;
      }
      bool vanishes = last_mag < 1e-4 || last_mag < 1e-2 * first_mag;
      std::ostringstream os;
      os << "final magnitude " << last_mag;
      report.entries.push_back(
          make_entry("field_magnitude_continuity", count,
                     vanishes ? worst : std::max(worst, 1.0), 0.0, os.str()));
    }

    // ---- settling bound gate -------------------------------------------
    try {
      ctx.delta = working_delta(ctx.tau, delta_floor);
      ctx.bound = build_bound(ctx.delta, scaling, nu);
      ctx.nu_eff = ctx.bound.nu ? *ctx.bound.nu
                                : (ctx.bound.xi ? 2.0 * *ctx.bound.xi : 0.0);
      have_bound = true;
      std::ostringstream os;
      os << "delta " << ctx.delta << ", T_max " << ctx.bound.t_max_general;
      report.entries.push_back(make_entry("settling_window", 1, 0.0, 0.0, os.str()));
    } catch (const Error& err) {
      report.entries.push_back(failed_entry("settling_window", err.what()));
    }
  }

  if (cert && have_bound) {
    const Vector& xs = cert->x_star;

    {
      // Lyapunov decrease along a short high-resolution trajectory.
      SolverConfig cfg;
      cfg.lambda = lambda;
      cfg.scaling = scaling;
      cfg.gamma = settings.fd_dt;
      cfg.tol = 1e-15;
      cfg.max_steps = settings.fd_steps;
      double worst = 0.0;
      long checked = 0;
      for (double radius : {1e-2, 1.0, 1e2}) {
        Vector x0 = xs + radius * random_direction(rng, dim);
        Trace tr = integrate_continuous(P, cfg, FieldKind::Modified, x0,
                                        settings.fd_dt * settings.fd_steps, &xs);
        for (std::size_t i = 0; i + 1 < tr.rows.size(); ++i) {
          double v = tr.rows[i].lyapunov;
          if (!(v > 1e-16)) continue;
          double fd = (tr.rows[i + 1].lyapunov - v) / settings.fd_dt;
          double bound_rhs = ctx.bound.p1 * std::pow(v, ctx.bound.alpha1) +
                             ctx.bound.p2 * std::pow(v, ctx.bound.alpha2);
          double tol_fd = 1e-4 * (1.0 + std::abs(fd));
          worst = std::max(worst, fd + bound_rhs - tol_fd);
          ++checked;
        }
      }
      report.entries.push_back(make_entry("lyapunov_decrease_fd", checked, worst,
                                          0.0));
    }

    {
      // gamma*sigma = 1 relaxed iteration contracts at factor tau per step.
      Vector x0 = xs + 5.0 * random_direction(rng, dim);
      Trace tr = euler_nominal(P, 1.0, 1.0, lambda, x0, 1e-13, 200, &xs);
      double worst = 0.0;
      for (std::size_t i = 0; i + 1 < tr.rows.size(); ++i) {
        double d0 = tr.rows[i].distance_to_solution;
        double d1 = tr.rows[i + 1].distance_to_solution;
        if (d0 < 1e-13) continue;
        worst = std::max(worst, d1 - ctx.tau * d0 * (1.0 + 1e-8));
      }
      report.entries.push_back(make_entry("nominal_linear_convergence",
                                          static_cast<long>(tr.rows.size()),
                                          worst, 0.0));
    }

    {
      // Fixed-time cap: settle within T_max from every radius.
      SolverConfig cfg;
      cfg.lambda = lambda;
      cfg.scaling = scaling;
      cfg.gamma = settings.settling_dt;
      cfg.tol = (1.0 - ctx.delta) * settings.settling_eps;
      cfg.max_steps = 100000000;
      double worst = -std::numeric_limits<double>::infinity();
      bool all_settled = true;
      for (double radius : settings.settling_radii) {
        Vector x0 = xs + radius * random_direction(rng, dim);
        Trace tr = integrate_continuous(P, cfg, FieldKind::Modified, x0,
                                        2.0 * ctx.bound.t_max_general, &xs);
        auto settle = empirical_settling_time(tr, settings.settling_eps);
        if (!settle) {
          all_settled = false;
          continue;
        }
        worst = std::max(worst, *settle - ctx.bound.t_max_general);
      }
      InvariantResult e = make_entry(
          "settling_time_cap", static_cast<long>(settings.settling_radii.size()),
          all_settled ? std::max(worst, 0.0) : std::numeric_limits<double>::infinity(),
          0.0);
      if (!all_settled) e.note = "a trajectory failed to settle";
      report.entries.push_back(e);
    }

    if (ctx.nu_eff > 2.0) {
      try {
        Vector x0 = xs + 10.0 * random_direction(rng, dim);
        double gstar = find_consistent_gamma(P, lambda, scaling, ctx.nu_eff,
                                             settings.consistency_eps, x0, xs,
                                             ctx.delta,
                                             settings.consistency_gamma_hi, 25);
        bool holds_half =
            discrete_consistency_holds(P, lambda, scaling, ctx.nu_eff,
                                       settings.consistency_eps, x0, xs,
                                       ctx.delta, 0.5 * gstar);
        std::ostringstream os;
        os << "gamma* = " << gstar;
        report.entries.push_back(
            make_entry("discrete_consistency", 2, holds_half ? 0.0 : 1.0, 0.0,
                       os.str()));
      } catch (const Error& err) {
        report.entries.push_back(failed_entry("discrete_consistency", err.what()));
      }
    }

    {
      SolverConfig cfg;
      cfg.lambda = lambda;
      cfg.scaling = scaling;
      cfg.gamma = 1e-2;
      cfg.tol = 1e-10;
      cfg.max_steps = 5000;
      Vector x0 = xs + random_in_cube(rng, dim, 5.0);
      Trace a = euler_modified(P, cfg, x0, &xs);
      Trace b = euler_modified(P, cfg, x0, &xs);
      bool identical = trace_to_csv(a) == trace_to_csv(b);
      report.entries.push_back(make_entry("trace_determinism",
                                          static_cast<long>(a.rows.size()),
                                          identical ? 0.0 : 1.0, 0.0));
    }
  }

  // ---- settling (instance-independent algebra) --------------------------
  {
    long mismatches = 0;
    long total = 0;
    for (double d = 0.05; d < 1.0; d += 0.09) {
      for (double kappa = 0.05; kappa < 2.55; kappa += 0.12) {
        ++total;
        double q = q_coefficient(1.0, kappa, d);
        double ineq = std::pow((1.0 - d) / (1.0 + d), 1.0 - kappa) - d;
        if ((q > 0.0) != (ineq > 0.0)) ++mismatches;
      }
    }
    report.entries.push_back(make_entry("q_positivity_grid", total,
                                        static_cast<double>(mismatches), 0.0));
  }

  {
    double r = have_bound ? ctx.bound.r : 1.0;
    double s = have_bound ? ctx.bound.s : 2.0;
    double nu_env = ctx.nu_eff > 2.0 ? ctx.nu_eff : 4.0;
    double gamma_env = 1e-2;
    long n_star = envelope_step_limit(r, s, nu_env, gamma_env);
    double prev = std::numeric_limits<double>::infinity();
    long bad = 0;
    for (long n = 1; n <= n_star; ++n) {
      double v = discrete_envelope(r, s, nu_env, gamma_env, 0.5, n).value;
      if (!(v < prev)) ++bad;
      prev = v;
    }
    report.entries.push_back(
        make_entry("envelope_monotonicity", n_star, static_cast<double>(bad), 0.0));
  }

  {
    double worst = 0.0;
    for (double c : {0.1, 2.0, 37.5}) {
      double base = t_max_general(0.7, 0.8, 1.9, 1.4);
      double scaled = t_max_general(c * 0.7, 0.8, c * 1.9, 1.4);
      worst = std::max(worst, std::abs(scaled * c - base) / base);
    }
    report.entries.push_back(make_entry("tmax_scaling", 3, worst, 1e-12));
  }

  if (have_bound && ctx.bound.t_max_pi) {
    bool finite = std::isfinite(ctx.bound.t_max_general) &&
                  ctx.bound.t_max_general > 0.0 &&
                  std::isfinite(*ctx.bound.t_max_pi) && *ctx.bound.t_max_pi > 0.0;
    report.entries.push_back(
        make_entry("bound_finiteness", 2, finite ? 0.0 : 1.0, 0.0));
  }

  // ---- problem-class invariants ----------------------------------------
  if (cert && !std::holds_alternative<std::monostate>(source)) {
    const Vector& xs = cert->x_star;
    double worst_parity = 0.0;
    int parity_samples = 500;
    double worst_native = 0.0;
    std::string native_note;

    if (const CopSpec* cop = std::get_if<CopSpec>(&source)) {
      worst_parity =
          residual_parity_check(*cop, lambda, parity_samples, settings.seed)
              .max_deviation;
      worst_native =
          (xs - prox(cop->g, lambda, xs - lambda * cop->f.gradient(xs))).norm();
      native_note = "prox-gradient stationarity residual";
    } else if (const MviSpec* mvi = std::get_if<MviSpec>(&source)) {
      worst_parity =
          residual_parity_check(*mvi, lambda, parity_samples, settings.seed)
              .max_deviation;
      Vector fx = evaluate_forward(mvi->F, xs);
      double gx = mvi->g.value(xs);
      for (int k = 0; k < 1000; ++k) {
        Vector y = mvi->g.kind() == FunctionSpec::Kind::Indicator
                       ? feasible_sample(mvi->g.indicator_set(), rng,
                                         settings.sample_radius)
                       : Vector(xs + random_in_cube(rng, dim,
                                                    settings.sample_radius));
        double gy = mvi->g.value(y);
        if (!std::isfinite(gy)) continue;
        worst_native = std::max(worst_native, -(fx.dot(y - xs) + gy - gx));
      }
      native_note = "max violation of <F(x*),y-x*> + g(y) - g(x*) >= 0";
    } else if (const ViSpec* vi = std::get_if<ViSpec>(&source)) {
      worst_parity =
          residual_parity_check(*vi, lambda, parity_samples, settings.seed)
              .max_deviation;
      Vector fx = evaluate_forward(vi->F, xs);
      for (int k = 0; k < 1000; ++k) {
        Vector y = feasible_sample(vi->C, rng, settings.sample_radius);
        worst_native = std::max(worst_native, -fx.dot(y - xs));
      }
      native_note = "max violation of <F(x*),y-x*> >= 0";

      // MVI with g = indicator(C) must share fb_map's floating path.
      MviSpec as_mvi{vi->F, FunctionSpec::indicator(vi->C)};
      AdaptedProblem mvi_form = mvi_to_inclusion(as_mvi, Enforcement::Warn);
      double dev = 0.0;
      for (int k = 0; k < 200; ++k) {
        Vector x = random_in_cube(rng, dim, settings.sample_radius);
        Vector a = fb_map(P, lambda, x);
        Vector b = fb_map(mvi_form.instance, lambda, x);
        dev = std::max(dev, (a - b).norm());
      }
      report.entries.push_back(make_entry("mvi_vi_fbmap_equivalence", 200, dev,
                                          0.0));
    }

    report.entries.push_back(
        make_entry("adapter_parity", parity_samples, worst_parity, 1e-12));
    report.entries.push_back(make_entry("native_optimality", 1000, worst_native,
                                        1e-8, native_note));
  }

  return report;
}

}  // namespace fbs
