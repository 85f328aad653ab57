#pragma once

#include "fbs/operators.hpp"

namespace fbs {

// An inclusion 0 in A(x) + B(x) on R^dim.
struct ProblemInstance {
  MaximalOperatorSpec A;
  ForwardOperatorSpec B;
  Eigen::Index dim = 0;

  ProblemInstance(MaximalOperatorSpec a, ForwardOperatorSpec b, Eigen::Index n);
};

// Scaling coefficients of the fixed-time field:
// phi(x) = c1 ||r||^(kappa1 - 1) + c2 ||r||^(kappa2 - 1),
// with c1, c2 > 0, kappa1 in (0,1), kappa2 > 1.
struct ScalingParams {
  double c1 = 1.0;
  double c2 = 1.0;
  double kappa1 = 0.5;
  double kappa2 = 1.5;

  ScalingParams() = default;
  ScalingParams(double c1_, double c2_, double kappa1_, double kappa2_);
};

// Residuals at or below this threshold are treated as the fixed-point branch.
double residual_guard(const Vector& x);

// T(x) = J_{lambda A}(x - lambda B(x)).
Vector fb_map(const ProblemInstance& P, double lambda, const Vector& x);

// r(x) = x - T(x); zero exactly at solutions of the inclusion.
Vector residual(const ProblemInstance& P, double lambda, const Vector& x);

// Scaling value; 0 on the fixed-point branch (||r|| <= guard).
double phi(const ProblemInstance& P, const ScalingParams& sp, double lambda,
           const Vector& x);

// Right-hand side -sigma * r(x) of the nominal system.
Vector nominal_field(const ProblemInstance& P, double sigma, double lambda,
                     const Vector& x);

// Right-hand side -phi(x) * r(x) of the modified system, evaluated in fused
// form (the residual is scaled once; no phi * r product of inf * 0 shape).
Vector modified_field(const ProblemInstance& P, const ScalingParams& sp,
                      double lambda, const Vector& x);

// V(x) = 0.5 ||x - x_star||^2.
double lyapunov(const Vector& x, const Vector& x_star);

// Internal helpers shared with the integrators: coefficient of -r in the
// modified field given ||r|| and the guard (0 on the fixed-point branch).
double scaling_coefficient(const ScalingParams& sp, double residual_norm,
                           double guard);

}  // namespace fbs
