#include "fbs/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fbs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_moduli(double mu_A, double mu_B, double L, const char* what) {
  if (!std::isfinite(mu_A) || !std::isfinite(mu_B) || !std::isfinite(L)) {
    throw InputError(std::string(what) + ": moduli must be finite");
  }
  if (L < 0.0) throw InputError(std::string(what) + ": requires L >= 0");
  if (mu_B > L) {
    std::ostringstream os;
    os << what << ": mu_B = " << mu_B << " > L = " << L
       << " contradicts Cauchy-Schwarz";
    throw InvalidSpecError(os.str());
  }
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::B1:
      return "B1";
    case Branch::B2:
      return "B2";
    case Branch::B3:
      return "B3";
    case Branch::Infeasible:
      return "infeasible";
  }
  return "?";
}

bool check_assumption_A(double mu_A, double mu_B, double L, double lambda) {
  if (L < 0.0) throw InputError("check_assumption_A: requires L >= 0");
  if (!(lambda > 0.0)) return false;
  if (!(1.0 + lambda * mu_A > 0.0)) return false;
  return 2.0 * (mu_A + mu_B) + lambda * mu_A * mu_A - lambda * L * L > 0.0;
}

bool check_assumption_A_prime(double mu_A, double beta, double lambda) {
  return mu_A > 0.0 && beta > 0.0 && lambda > 0.0 && lambda < 2.0 * beta;
}

Branch classify(double mu_A, double mu_B, double L) {
  validate_moduli(mu_A, mu_B, L, "classify");
  double sum = mu_A + mu_B;
  if (sum > 0.0) return Branch::B1;
  if (sum == 0.0 && mu_A * mu_A > L * L) return Branch::B2;
  if (sum < 0.0 && mu_A > L) return Branch::B3;
  return Branch::Infeasible;
}

LambdaInterval feasible_interval(double mu_A, double mu_B, double L) {
  Branch branch = classify(mu_A, mu_B, L);
  if (branch == Branch::Infeasible) {
    std::ostringstream os;
    os << "feasible_interval: no lambda > 0 satisfies assumption (A) for mu_A="
       << mu_A << ", mu_B=" << mu_B << ", L=" << L;
    throw InfeasibleError(os.str(), Branch::Infeasible);
  }
  double cap = mu_A < 0.0 ? -1.0 / mu_A : kInf;
  double sum = mu_A + mu_B;
  double diff = mu_A * mu_A - L * L;  // coefficient of lambda in (A)'s 2nd inequality
  LambdaInterval itv;
  if (diff < 0.0) {
    // lambda < 2 sum / (L^2 - mu_A^2); sum > 0 guaranteed (branch B1).
    itv.lo = 0.0;
    itv.hi = std::min(2.0 * sum / -diff, cap);
  } else if (diff == 0.0) {
    itv.lo = 0.0;
    itv.hi = cap;
  } else if (sum >= 0.0) {
    itv.lo = 0.0;
    itv.hi = cap;
  } else {
    // Branch B3: lambda > -2 sum / (mu_A^2 - L^2); mu_A > L >= 0 so cap = inf.
    itv.lo = -2.0 * sum / diff;
    itv.hi = cap;
  }
  return itv;
}

double contraction_factor(double mu_A, double mu_B, double L, double lambda) {
  validate_moduli(mu_A, mu_B, L, "contraction_factor");
  if (!check_assumption_A(mu_A, mu_B, L, lambda)) {
    std::ostringstream os;
    os << "contraction_factor: assumption (A) fails for lambda = " << lambda;
    throw IllPosedParameterError(os.str());
  }
  double num = 1.0 - lambda * (2.0 * mu_B - lambda * L * L);
  double den = 1.0 + lambda * mu_A;
  // num >= 0 under mu_B <= L; clamp against round-off at the tuned lambda.
  return std::sqrt(std::max(num, 0.0)) / den;
}

double working_delta(double tau, double delta_floor) {
  if (!(tau >= 0.0) || !(tau < 1.0)) {
    throw InputError("working_delta: requires tau in [0, 1)");
  }
  if (!(delta_floor < 1.0)) {
    throw InputError("working_delta: requires delta_floor < 1");
  }
  return std::max(tau, delta_floor);
}

double epsilon_of_delta(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InputError("epsilon_of_delta: requires delta in (0, 1)");
  }
  return std::log(delta) / std::log((1.0 - delta) / (1.0 + delta));
}

FeasibilityReport feasibility_report(double mu_A, double mu_B, double L,
                                     double lambda, double delta_floor) {
  FeasibilityReport rep;
  rep.lambda = lambda;
  rep.branch = classify(mu_A, mu_B, L);
  if (rep.branch == Branch::Infeasible) {
    rep.lambda_interval = LambdaInterval{0.0, 0.0};
    return rep;
  }
  rep.lambda_interval = feasible_interval(mu_A, mu_B, L);
  rep.lambda_feasible = rep.lambda_interval.contains(lambda) &&
                        check_assumption_A(mu_A, mu_B, L, lambda);
  if (rep.lambda_feasible) {
    rep.tau = contraction_factor(mu_A, mu_B, L, lambda);
    rep.delta = working_delta(rep.tau, delta_floor);
    if (rep.delta > 0.0 && rep.delta < 1.0) {
      rep.epsilon_delta = epsilon_of_delta(rep.delta);
      rep.kappa1_window_lo = std::max(0.0, 1.0 - rep.epsilon_delta);
    }
  }
  return rep;
}

}  // namespace fbs
