#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "fbs/errors.hpp"

namespace fbs {

// Trichotomy of parameter regimes admitting a valid step parameter lambda.
enum class Branch { B1, B2, B3, Infeasible };

const char* to_string(Branch b);

// Open interval (lo, hi); hi may be +inf.
struct LambdaInterval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double lambda) const { return lambda > lo && lambda < hi; }
  bool unbounded() const { return !std::isfinite(hi); }
  bool empty() const { return !(lo < hi); }
};

// No lambda satisfies the parameter conditions; carries the classification.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& msg, Branch branch)
      : Error(msg), branch_(branch) {}
  Branch branch() const { return branch_; }

 private:
  Branch branch_;
};

inline constexpr double kDefaultDeltaFloor = 1e-3;

// Both strict inequalities: 1 + lambda*mu_A > 0 and
// 2(mu_A + mu_B) + lambda*mu_A^2 - lambda*L^2 > 0.
bool check_assumption_A(double mu_A, double mu_B, double L, double lambda);

// Cocoercive variant: mu_A > 0, beta > 0 and lambda in (0, 2 beta).
bool check_assumption_A_prime(double mu_A, double beta, double lambda);

// B1: mu_A+mu_B > 0; B2: sum = 0 and mu_A^2 > L^2; B3: sum < 0 and mu_A > L.
// Rejects mu_B > L (invalid spec).
Branch classify(double mu_A, double mu_B, double L);

// Exact solution set of { lambda > 0, 1 + lambda*mu_A > 0,
// lambda (L^2 - mu_A^2) < 2(mu_A + mu_B) }. Throws InfeasibleError when empty.
LambdaInterval feasible_interval(double mu_A, double mu_B, double L);

// tau = sqrt( (1 - lambda (2 mu_B - lambda L^2)) / (1 + lambda mu_A)^2 ),
// in [0, 1) whenever assumption (A) holds.
double contraction_factor(double mu_A, double mu_B, double L, double lambda);

// delta = max(tau, delta_floor). A floor <= 0 disables the floor (delta may
// then be 0 and is rejected by downstream consumers).
double working_delta(double tau, double delta_floor);

// eps(delta) = log(delta) / log((1-delta)/(1+delta)) > 0 for delta in (0,1).
// The admissible kappa1 window is (1 - eps(delta), 1) intersect (0, 1).
double epsilon_of_delta(double delta);

struct FeasibilityReport {
  Branch branch = Branch::Infeasible;
  LambdaInterval lambda_interval;
  bool lambda_feasible = false;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double tau = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double epsilon_delta = std::numeric_limits<double>::quiet_NaN();
  // Admissible kappa1 window (1 - eps, 1) clipped to (0, 1).
  double kappa1_window_lo = std::numeric_limits<double>::quiet_NaN();
};

// Full report for a (mu_A, mu_B, L, lambda) combination. Does not throw on an
// infeasible spec or an out-of-interval lambda; the report says so instead.
FeasibilityReport feasibility_report(double mu_A, double mu_B, double L,
                                     double lambda,
                                     double delta_floor = kDefaultDeltaFloor);

}  // namespace fbs
