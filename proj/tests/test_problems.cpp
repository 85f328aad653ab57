#include <doctest.h>

#include <cmath>
#include <random>

#include "fbs/dynamics.hpp"
#include "fbs/problems.hpp"
#include "oracles.hpp"

using namespace fbs;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

ConvexSetSpec unit_box() {
  return ConvexSetSpec::box(Vector::Zero(2), Vector::Ones(2));
}

}  // namespace

TEST_CASE("cop_to_inclusion: f = 0.5||x||^2, g = 0 gives T = (1-lambda) Id") {
  CopSpec spec{FunctionSpec::quadratic(Matrix::Identity(2, 2), Vector::Zero(2)),
               FunctionSpec::zero()};
  AdaptedProblem a = cop_to_inclusion(spec);
  CHECK(a.report.assumptions_hold);
  CHECK(a.report.lambda_window.hi == doctest::Approx(2.0));
  Vector x = vec2(3.0, -2.0);
  CHECK((fb_map(a.instance, 0.4, x) - 0.6 * x).norm() <= 1e-15);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.4, x, 1e-12);
  CHECK(cert.x_star.norm() <= 1e-11);
}

TEST_CASE("cop_to_inclusion: box-constrained quadratic hits the corner") {
  CopSpec spec{FunctionSpec::quadratic(Matrix::Identity(2, 2), vec2(2.0, 2.0)),
               FunctionSpec::indicator(unit_box())};
  AdaptedProblem a = cop_to_inclusion(spec);
  SolutionCertificate cert = solve_fixed_point(a.instance, 1.0, vec2(0.2, 0.4),
                                               1e-13);
  CHECK((cert.x_star - Vector::Ones(2)).norm() <= 1e-10);

  // projected-gradient oracle
  Vector oracle = oracles::projected_gradient(
      [&](const Vector& x) { return spec.f.gradient(x); },
      [&](const Vector& x) { return project(spec.g.indicator_set(), x); },
      vec2(0.0, 0.0), 0.5, 100000, 1e-15);
  CHECK((cert.x_star - oracle).norm() <= 1e-8);
}

TEST_CASE("cop_to_inclusion: quadratic plus l1 against the prox-gradient oracle") {
  Matrix Q = vec2(1.0, 3.0).asDiagonal();
  CopSpec spec{FunctionSpec::quadratic(Q, vec2(1.0, 3.0)),
               FunctionSpec::l1_norm(0.5)};
  AdaptedProblem a = cop_to_inclusion(spec);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.3, vec2(0.0, 0.0),
                                               1e-13);

  Vector oracle = oracles::proximal_gradient(
      [&](const Vector& x) { return spec.f.gradient(x); },
      [&](double step, const Vector& x) { return prox(spec.g, step, x); },
      vec2(0.0, 0.0), 0.3, 200000, 1e-16);
  CHECK((cert.x_star - oracle).norm() <= 1e-8);

  // analytic coordinates: 0 in x1 - 1 + 0.5 sign(x1); 0 in 3 x2 - 3 + 0.5 sign(x2)
  CHECK(cert.x_star[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(cert.x_star[1] == doctest::Approx(2.5 / 3.0).epsilon(1e-9));
}

TEST_CASE("mvi_to_inclusion: g = 0 reduces to the unconstrained equation") {
  Matrix M(2, 2);
  M << 2.0, 1.0, -1.0, 2.0;
  MviSpec spec{ForwardOperatorSpec::affine(M, vec2(-2.0, 1.0)),
               FunctionSpec::zero()};
  AdaptedProblem a = mvi_to_inclusion(spec);
  Vector x = vec2(0.7, -0.3);
  CHECK((fb_map(a.instance, 0.2, x) -
         (x - 0.2 * evaluate_forward(spec.F, x))).norm() == 0.0);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.2, x, 1e-13);
  Vector oracle = M.partialPivLu().solve(vec2(2.0, -1.0));
  CHECK((cert.x_star - oracle).norm() <= 1e-10);
}

TEST_CASE("mvi_to_inclusion: soft-threshold fixed point at the origin") {
  MviSpec spec{
      ForwardOperatorSpec::affine(Matrix::Identity(2, 2), vec2(-1.0, -1.0)),
      FunctionSpec::l1_norm(1.0)};
  AdaptedProblem a = mvi_to_inclusion(spec);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.7, vec2(2.0, -2.0),
                                               1e-13);
  CHECK(cert.x_star.norm() <= 1e-11);  // |1| <= weight keeps 0 stationary

  // brute-force scan over [-3,3]^2 for the minimal fixed-point residual
  Vector scan = oracles::grid_fixed_point(
      [&](const Vector& x) { return fb_map(a.instance, 0.7, x); }, -3.0, 3.0,
      240);
  CHECK(scan.norm() <= 0.03);
}

TEST_CASE("mvi_to_inclusion: rotation-plus-shift with a ball constraint") {
  Matrix M(2, 2);
  M << 2.0, 1.0, -1.0, 2.0;
  MviSpec spec{ForwardOperatorSpec::affine(M, Vector::Zero(2)),
               FunctionSpec::indicator(ConvexSetSpec::ball(Vector::Zero(2), 1.0))};
  AdaptedProblem a = mvi_to_inclusion(spec);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.3, vec2(0.9, 0.2),
                                               1e-13);
  CHECK(cert.x_star.norm() <= 1e-11);  // 0 feasible and F(0) = 0
  CHECK(residual(a.instance, 0.3, Vector::Zero(2)).norm() == 0.0);
}

TEST_CASE("vi_to_inclusion: identity field over a box settles at the origin") {
  ViSpec spec{ForwardOperatorSpec::identity(),
              ConvexSetSpec::box(-Vector::Ones(3), Vector::Ones(3))};
  AdaptedProblem a = vi_to_inclusion(spec);
  Vector x0(3);
  x0 << 0.9, -0.7, 0.2;
  SolutionCertificate cert = solve_fixed_point(a.instance, 1.0, x0, 1e-13);
  CHECK(cert.x_star.norm() <= 1e-12);
}

TEST_CASE("vi_to_inclusion: agrees with the equivalent COP at the corner") {
  ViSpec vi{ForwardOperatorSpec::affine(Matrix::Identity(2, 2), vec2(-2.0, -2.0)),
            unit_box()};
  CopSpec cop{FunctionSpec::quadratic(Matrix::Identity(2, 2), vec2(2.0, 2.0)),
              FunctionSpec::indicator(unit_box())};
  AdaptedProblem avi = vi_to_inclusion(vi);
  AdaptedProblem acop = cop_to_inclusion(cop);
  SolutionCertificate cvi = solve_fixed_point(avi.instance, 1.0, vec2(0.1, 0.1),
                                              1e-13);
  SolutionCertificate ccop = solve_fixed_point(acop.instance, 1.0,
                                               vec2(0.1, 0.1), 1e-13);
  CHECK((cvi.x_star - ccop.x_star).norm() <= 1e-10);
  CHECK((cvi.x_star - Vector::Ones(2)).norm() <= 1e-10);
}

TEST_CASE("vi_to_inclusion: halfspace instance against the KKT brute force") {
  Matrix M(2, 2);
  M << 1.0, -0.5, 0.5, 1.0;
  Vector q = vec2(-1.0, 0.0);
  ViSpec spec{ForwardOperatorSpec::affine(M, q),
              ConvexSetSpec::halfspace(vec2(1.0, 0.0), 0.0)};
  AdaptedProblem a = vi_to_inclusion(spec);
  SolutionCertificate cert = solve_fixed_point(a.instance, 0.8, vec2(-1.0, 2.0),
                                               1e-13);

  // KKT brute force: the interior stationary point Mx = -q (infeasible here)
  // and a sweep over the boundary x1 = 0 for the VI-residual-zero point.
  Vector interior = M.partialPivLu().solve(-q);
  Vector best = interior;
  double best_res = std::numeric_limits<double>::infinity();
  auto vi_res = [&](const Vector& x) {
    return (x - project(spec.C, x - evaluate_forward(spec.F, x))).norm();
  };
  if (spec.C.contains(interior)) best_res = vi_res(interior);
  for (double t = -5.0; t <= 5.0; t += 1e-3) {
    Vector cand = vec2(0.0, t);
    double r = vi_res(cand);
    if (r < best_res) {
      best_res = r;
      best = cand;
    }
  }
  CHECK((cert.x_star - best).norm() <= 1e-3);  // boundary sweep resolution
  CHECK(cert.x_star.norm() <= 1e-11);          // analytic solution is the origin
}

TEST_CASE("residual_parity_check: adapters match the closed forms") {
  CopSpec cop{FunctionSpec::quadratic(Matrix::Identity(2, 2), vec2(2.0, 2.0)),
              FunctionSpec::indicator(unit_box())};
  CHECK(residual_parity_check(cop, 0.7, 1000).max_deviation == 0.0);

  Matrix M(2, 2);
  M << 1.0, -0.5, 0.5, 1.0;
  ViSpec vi{ForwardOperatorSpec::affine(M, vec2(-1.0, 0.0)),
            ConvexSetSpec::halfspace(vec2(1.0, 0.0), 0.0)};
  CHECK(residual_parity_check(vi, 0.8, 1000).max_deviation <= 1e-15);

  MviSpec mvi{ForwardOperatorSpec::affine(M, vec2(-1.0, 0.0)),
              FunctionSpec::l1_norm(0.3)};
  CHECK(residual_parity_check(mvi, 0.8, 1000).max_deviation <= 1e-15);
}

TEST_CASE("MVI with indicator g is pointwise identical to the VI adapter") {
  Matrix M(2, 2);
  M << 1.0, -0.5, 0.5, 1.0;
  auto F = ForwardOperatorSpec::affine(M, vec2(0.3, -0.2));
  ViSpec vi{F, unit_box()};
  MviSpec mvi{F, FunctionSpec::indicator(unit_box())};
  ProblemInstance pvi = vi_to_inclusion(vi).instance;
  ProblemInstance pmvi = mvi_to_inclusion(mvi).instance;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(-10.0, 10.0);
  for (int k = 0; k < 500; ++k) {
    Vector x = vec2(unif(rng), unif(rng));
    Vector a = fb_map(pvi, 0.9, x);
    Vector b = fb_map(pmvi, 0.9, x);
    CHECK(a[0] == b[0]);  // same floating path, bitwise
    CHECK(a[1] == b[1]);
  }
}

TEST_CASE("moderate-dimension MVI against the prox-gradient oracle") {
  const Eigen::Index n = 40;
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix S(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) S(i, j) = 0.3 * unif(rng);
  }
  Matrix M = 2.0 * Matrix::Identity(n, n) + 0.5 * (S - S.transpose());
  Vector q(n);
  for (Eigen::Index i = 0; i < n; ++i) q[i] = unif(rng);

  MviSpec spec{ForwardOperatorSpec::affine(M, q), FunctionSpec::l1_norm(0.4)};
  AdaptedProblem a = mvi_to_inclusion(spec, Enforcement::Error);
  double lambda = 0.9 * a.report.lambda_window.hi;
  REQUIRE(check_assumption_A(a.instance.A.mu(), a.instance.B.mu(),
                             a.instance.B.lipschitz(), lambda));

  SolutionCertificate cert =
      solve_fixed_point(a.instance, lambda, Vector::Zero(n), 1e-12);
  Vector oracle = oracles::proximal_gradient(
      [&](const Vector& x) { return M * x + q; },
      [&](double step, const Vector& x) { return prox(spec.g, step, x); },
      Vector::Zero(n), lambda, 500000, 1e-16);
  CHECK((cert.x_star - oracle).norm() <= 1e-8);
  CHECK(residual_parity_check(spec, lambda, 200).max_deviation <= 1e-15);
}

TEST_CASE("assumption gating: warn by default, error on demand") {
  // f affine: gradient is constant, mu = 0 violates (A1)
  CopSpec weak{FunctionSpec::affine(vec2(1.0, 0.0)), FunctionSpec::zero()};
  AdaptedProblem warned = cop_to_inclusion(weak, Enforcement::Warn);
  CHECK_FALSE(warned.report.assumptions_hold);
  CHECK_FALSE(warned.report.warnings.empty());
  CHECK_THROWS_AS(cop_to_inclusion(weak, Enforcement::Error), AssumptionError);

  ViSpec vi{ForwardOperatorSpec::identity(), unit_box()};
  AdaptedProblem a = vi_to_inclusion(vi, Enforcement::Error);  // (A2) holds
  CHECK(a.report.assumptions_hold);

  // lambda window (0, 2 mu / L^2) = (0, 2) for the identity field
  AdapterReport rep = a.report;
  validate_lambda_window(rep, 1.0, Enforcement::Error);
  CHECK(rep.warnings.empty());
  CHECK_THROWS_AS(validate_lambda_window(rep, 2.5, Enforcement::Error),
                  AssumptionError);
  validate_lambda_window(rep, 2.5, Enforcement::Warn);
  CHECK_FALSE(rep.warnings.empty());
}
