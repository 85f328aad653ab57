#include "fbs/fb_core.hpp"

#include <cmath>
#include <sstream>

namespace fbs {

ProblemInstance::ProblemInstance(MaximalOperatorSpec a, ForwardOperatorSpec b,
                                 Eigen::Index n)
    : A(std::move(a)), B(std::move(b)), dim(n) {
  if (n <= 0) throw InvalidSpecError("ProblemInstance: requires dim > 0");
  if (A.dim() != 0 && A.dim() != n) {
    throw InvalidSpecError("ProblemInstance: A acts on a different dimension");
  }
  if (B.dim() != 0 && B.dim() != n) {
    throw InvalidSpecError("ProblemInstance: B acts on a different dimension");
  }
}

ScalingParams::ScalingParams(double c1_, double c2_, double kappa1_,
                             double kappa2_)
    : c1(c1_), c2(c2_), kappa1(kappa1_), kappa2(kappa2_) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) {
    throw InputError("ScalingParams: requires c1, c2 > 0");
  }
  if (!(kappa1 > 0.0) || !(kappa1 < 1.0)) {
    throw InputError("ScalingParams: requires kappa1 in (0, 1)");
  }
  if (!(kappa2 > 1.0)) {
    throw InputError("ScalingParams: requires kappa2 > 1");
  }
}

double residual_guard(const Vector& x) { return 1e-14 * (1.0 + x.norm()); }

Vector fb_map(const ProblemInstance& P, double lambda, const Vector& x) {
  if (x.size() != P.dim) {
    std::ostringstream os;
    os << "fb_map: expected dimension " << P.dim << ", got " << x.size();
    throw InputError(os.str());
  }
  return resolvent(P.A, lambda, x - lambda * evaluate_forward(P.B, x));
}

Vector residual(const ProblemInstance& P, double lambda, const Vector& x) {
  return x - fb_map(P, lambda, x);
}

double scaling_coefficient(const ScalingParams& sp, double residual_norm,
                           double guard) {
  if (residual_norm <= guard) return 0.0;
  return sp.c1 * std::pow(residual_norm, sp.kappa1 - 1.0) +
         sp.c2 * std::pow(residual_norm, sp.kappa2 - 1.0);
}

double phi(const ProblemInstance& P, const ScalingParams& sp, double lambda,
           const Vector& x) {
  Vector r = residual(P, lambda, x);
  return scaling_coefficient(sp, r.norm(), residual_guard(x));
}

Vector nominal_field(const ProblemInstance& P, double sigma, double lambda,
                     const Vector& x) {
  if (!(sigma > 0.0)) throw InputError("nominal_field: requires sigma > 0");
  return -sigma * residual(P, lambda, x);
}

Vector modified_field(const ProblemInstance& P, const ScalingParams& sp,
                      double lambda, const Vector& x) {
  Vector r = residual(P, lambda, x);
  double coeff = scaling_coefficient(sp, r.norm(), residual_guard(x));
  if (coeff == 0.0) return Vector::Zero(x.size());
  return -coeff * r;
}

double lyapunov(const Vector& x, const Vector& x_star) {
  if (x.size() != x_star.size()) {
    throw InputError("lyapunov: dimension mismatch");
  }
  return 0.5 * (x - x_star).squaredNorm();
}

}  // namespace fbs
