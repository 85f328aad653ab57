#pragma once

#include <optional>
#include <utility>

#include "fbs/fb_core.hpp"

namespace fbs {

// Closed-form settling-time data derived from delta and the scaling params.
// q1/q2 are the per-term Lyapunov decrease coefficients (the kappa2 > 1 term
// uses the swapped sandwich sides, see build_bound); p_i = 2^alpha_i q_i.
struct SettlingBound {
  double delta = 0.0;
  double epsilon_delta = 0.0;
  double q1 = 0.0, q2 = 0.0;
  double p1 = 0.0, p2 = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double t_max_general = 0.0;
  std::optional<double> t_max_pi;  // set when the exponents are xi-symmetric
  std::optional<double> xi;
  std::optional<double> nu;
  // nu-parameterization aliases and the discrete-envelope data.
  double r = 0.0, s = 0.0;  // = p1, p2
  double rho = 0.5;         // quadratic-growth constant of V = 0.5||.||^2
  std::optional<long> n_star;
  std::optional<double> gamma;
};

// q(c, kappa) = c / (1-delta)^(1-kappa) * ( ((1-delta)/(1+delta))^(1-kappa)
//               - delta ). Positive exactly on the admissible kappa window;
// a negative return signals an inadmissible kappa.
double q_coefficient(double c, double kappa, double delta);

struct PAlpha {
  double p;
  double alpha;
};

// alpha = (1+kappa)/2 and p = 2^alpha * q(c, kappa).
PAlpha p_coefficient(double c, double kappa, double delta);

// T_max = 1/(p1 (1-alpha1)) + 1/(p2 (alpha2-1)), for alpha1 in (0.5, 1),
// alpha2 > 1, p1, p2 > 0.
double t_max_general(double p1, double alpha1, double p2, double alpha2);

// T_max = pi * xi / sqrt(p1 p2) for the symmetric exponent pair
// alpha = 1 -+ 1/(2 xi), xi > 1.
double t_max_pi(double p1, double p2, double xi);

// kappa1 = 1 - 2/nu, kappa2 = 1 + 2/nu for nu > 2 (implied alpha = 1 -+ 1/nu).
std::pair<double, double> kappa_from_nu(double nu);

// n* = ceil( nu pi / (2 gamma sqrt(r s)) ), with a round-off snap so exact
// hits do not spill over.
long envelope_step_limit(double r, double s, double nu, double gamma);

struct EnvelopeResult {
  double value;  // +inf at n = 0 (pole of the bound)
  long n_star;
};

// Envelope value (1/sqrt(rho)) (sqrt(r/s) tan(pi/2 - sqrt(rs) gamma n / nu))^(nu/2)
// at step n, without the caller-owned additive eps. Throws for n > n*.
EnvelopeResult discrete_envelope(double r, double s, double nu, double gamma,
                                 double rho, long n);

// Full coefficient chain for a given delta and scaling. Rejects kappa1 outside
// (1 - eps(delta), 1) and kappa2 outside (1, 1 + eps(delta)) with the
// admissible window in the error; for the nu-symmetric exponents the two
// conditions coincide with nu > max(2, 2/eps(delta)). The decrease coefficient
// of the kappa2 term bounds ||r|| from the sides valid for exponents above one
// (q_coefficient's closed form is the kappa < 1 regime), so the emitted
// inequality dV/dt <= -(p1 V^a1 + p2 V^a2) actually holds along trajectories.
// When nu (or a symmetric exponent pair) and gamma are available, n_star is
// populated.
SettlingBound build_bound(double delta, const ScalingParams& scaling,
                          std::optional<double> nu = std::nullopt,
                          std::optional<double> xi = std::nullopt,
                          std::optional<double> gamma = std::nullopt);

}  // namespace fbs
