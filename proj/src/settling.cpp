#include "fbs/settling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fbs/feasibility.hpp"

namespace fbs {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Per-term Lyapunov decrease coefficient. The closed form with the
// (1-delta)/(1+delta) ratio matches the kappa < 1 regime; above one the
// residual-sandwich sides swap, which both changes the value and caps the
// admissible exponent at 1 + eps(delta).
double decrease_coefficient(double c, double kappa, double delta) {
  if (kappa <= 1.0) return q_coefficient(c, kappa, delta);
  return c * (std::pow(1.0 - delta, kappa - 1.0) -
              delta * std::pow(1.0 + delta, kappa - 1.0));
}

}  // namespace

double q_coefficient(double c, double kappa, double delta) {
  if (!(c > 0.0)) throw InputError("q_coefficient: requires c > 0");
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw InputError("q_coefficient: requires delta in (0, 1)");
  }
  double one_minus = 1.0 - delta;
  double ratio = one_minus / (1.0 + delta);
  return c / std::pow(one_minus, 1.0 - kappa) *
         (std::pow(ratio, 1.0 - kappa) - delta);
}

PAlpha p_coefficient(double c, double kappa, double delta) {
  double alpha = 0.5 * (1.0 + kappa);
  double q = q_coefficient(c, kappa, delta);
  return PAlpha{std::pow(2.0, alpha) * q, alpha};
}

double t_max_general(double p1, double alpha1, double p2, double alpha2) {
  if (!(p1 > 0.0) || !(p2 > 0.0)) {
    throw InputError("t_max_general: requires p1, p2 > 0");
  }
  if (!(alpha1 > 0.0) || !(alpha1 < 1.0)) {
    throw InputError("t_max_general: requires alpha1 in (0, 1)");
  }
  if (!(alpha2 > 1.0)) {
    throw InputError("t_max_general: requires alpha2 > 1");
  }
  return 1.0 / (p1 * (1.0 - alpha1)) + 1.0 / (p2 * (alpha2 - 1.0));
}

double t_max_pi(double p1, double p2, double xi) {
  if (!(p1 > 0.0) || !(p2 > 0.0)) {
    throw InputError("t_max_pi: requires p1, p2 > 0");
  }
  if (!(xi > 1.0)) throw InputError("t_max_pi: requires xi > 1");
  return kPi * xi / std::sqrt(p1 * p2);
}

std::pair<double, double> kappa_from_nu(double nu) {
  if (!(nu > 2.0)) {
    throw InputError("kappa_from_nu: requires nu > 2 (kappa1 must stay in (0,1))");
  }
  return {1.0 - 2.0 / nu, 1.0 + 2.0 / nu};
}

long envelope_step_limit(double r, double s, double nu, double gamma) {
  if (!(r > 0.0) || !(s > 0.0)) {
    throw InputError("envelope_step_limit: requires r, s > 0");
  }
  if (!(nu > 2.0)) throw InputError("envelope_step_limit: requires nu > 2");
  if (!(gamma > 0.0)) throw InputError("envelope_step_limit: requires gamma > 0");
  double v = nu * kPi / (2.0 * gamma * std::sqrt(r * s));
  double snapped = std::round(v);
  if (std::abs(v - snapped) < 1e-9 * std::max(1.0, std::abs(v))) v = snapped;
  return static_cast<long>(std::ceil(v));
}

EnvelopeResult discrete_envelope(double r, double s, double nu, double gamma,
                                 double rho, long n) {
  long n_star = envelope_step_limit(r, s, nu, gamma);
  if (!(rho > 0.0)) throw InputError("discrete_envelope: requires rho > 0");
  if (n < 0) throw InputError("discrete_envelope: requires n >= 0");
  if (n > n_star) {
    std::ostringstream os;
    os << "discrete_envelope: n = " << n << " exceeds n* = " << n_star
       << " (tan argument leaves (0, pi/2])";
    throw InputError(os.str());
  }
  if (n == 0) {
    return EnvelopeResult{std::numeric_limits<double>::infinity(), n_star};
  }
  double theta = kPi / 2.0 - std::sqrt(r * s) * gamma * static_cast<double>(n) / nu;
  // The ceiling in n* can push theta slightly below zero at n = n*.
  if (theta <= 0.0) return EnvelopeResult{0.0, n_star};
  double value =
      std::pow(std::sqrt(r / s) * std::tan(theta), nu / 2.0) / std::sqrt(rho);
  return EnvelopeResult{value, n_star};
}

SettlingBound build_bound(double delta, const ScalingParams& scaling,
                          std::optional<double> nu, std::optional<double> xi,
                          std::optional<double> gamma) {
  // Re-run the ScalingParams constraints; aggregates may bypass the ctor.
  ScalingParams validated(scaling.c1, scaling.c2, scaling.kappa1, scaling.kappa2);
  (void)validated;

  SettlingBound b;
  b.delta = delta;
  b.epsilon_delta = epsilon_of_delta(delta);  // validates delta in (0,1)

  double window_lo = std::max(0.0, 1.0 - b.epsilon_delta);
  if (!(scaling.kappa1 > window_lo)) {
    std::ostringstream os;
    os << "build_bound: kappa1 = " << scaling.kappa1
       << " outside the admissible window (" << window_lo << ", 1)";
    throw WindowError(os.str(), window_lo, 1.0);
  }
  double kappa2_hi = 1.0 + b.epsilon_delta;
  if (!(scaling.kappa2 < kappa2_hi)) {
    std::ostringstream os;
    os << "build_bound: kappa2 = " << scaling.kappa2
       << " outside the admissible window (1, " << kappa2_hi << ")";
    throw WindowError(os.str(), 1.0, kappa2_hi);
  }

  if (nu) {
    auto [k1, k2] = kappa_from_nu(*nu);
    if (std::abs(k1 - scaling.kappa1) > 1e-9 ||
        std::abs(k2 - scaling.kappa2) > 1e-9) {
      throw InputError(
          "build_bound: scaling exponents do not match kappa(nu) = 1 -+ 2/nu");
    }
    b.nu = *nu;
  }

  b.q1 = decrease_coefficient(scaling.c1, scaling.kappa1, delta);
  b.q2 = decrease_coefficient(scaling.c2, scaling.kappa2, delta);
  if (!(b.q1 > 0.0) || !(b.q2 > 0.0)) {
    std::ostringstream os;
    os << "build_bound: nonpositive q coefficients (q1 = " << b.q1
       << ", q2 = " << b.q2 << ")";
    throw WindowError(os.str(), window_lo, kappa2_hi);
  }
  b.alpha1 = 0.5 * (1.0 + scaling.kappa1);
  b.alpha2 = 0.5 * (1.0 + scaling.kappa2);
  b.p1 = std::pow(2.0, b.alpha1) * b.q1;
  b.p2 = std::pow(2.0, b.alpha2) * b.q2;
  b.t_max_general = t_max_general(b.p1, b.alpha1, b.p2, b.alpha2);

  // xi-symmetric exponents: kappa2 - 1 == 1 - kappa1, i.e. xi = 1/(1-kappa1).
  bool symmetric =
      std::abs((1.0 - scaling.kappa1) - (scaling.kappa2 - 1.0)) <= 1e-12;
  if (xi) {
    double expected_k1 = 1.0 - 1.0 / *xi;
    if (!(*xi > 1.0) || std::abs(expected_k1 - scaling.kappa1) > 1e-9 ||
        !symmetric) {
      throw InputError(
          "build_bound: xi does not match the symmetric exponent pair");
    }
    b.xi = *xi;
  } else if (symmetric) {
    b.xi = 1.0 / (1.0 - scaling.kappa1);
  }
  if (b.xi) b.t_max_pi = t_max_pi(b.p1, b.p2, *b.xi);

  b.r = b.p1;
  b.s = b.p2;
  b.rho = 0.5;
  if (gamma) {
    if (!(*gamma > 0.0)) throw InputError("build_bound: requires gamma > 0");
    b.gamma = *gamma;
    double nu_eff = b.nu ? *b.nu : (b.xi ? 2.0 * *b.xi : 0.0);
    if (nu_eff > 2.0) {
      b.n_star = envelope_step_limit(b.r, b.s, nu_eff, *gamma);
      if (!b.nu) b.nu = nu_eff;
    }
  }
  return b;
}

}  // namespace fbs
