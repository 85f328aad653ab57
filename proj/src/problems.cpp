#include "fbs/problems.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace fbs {

namespace {

Eigen::Index common_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a == 0 && b == 0) {
    throw InvalidSpecError(std::string(what) +
                           ": cannot infer the problem dimension");
  }
  if (a != 0 && b != 0 && a != b) {
    throw InvalidSpecError(std::string(what) + ": dimension mismatch");
  }
  return a != 0 ? a : b;
}

LambdaInterval sufficient_window(double mu, double L) {
  if (mu > 0.0 && L > 0.0) return LambdaInterval{0.0, 2.0 * mu / (L * L)};
  if (mu > 0.0 && L == 0.0) {
    return LambdaInterval{0.0, std::numeric_limits<double>::infinity()};
  }
  return LambdaInterval{0.0, 0.0};  // empty
}

AdapterReport make_report(const ForwardOperatorSpec& B, const char* assumption,
                          Enforcement enforcement) {
  AdapterReport rep;
  rep.mu = B.mu();
  rep.lipschitz = B.lipschitz();
  rep.lambda_window = sufficient_window(rep.mu, rep.lipschitz);
  rep.assumptions_hold = rep.mu > 0.0 && rep.lipschitz > 0.0;
  if (!rep.assumptions_hold) {
    std::ostringstream os;
    os << assumption << " violated: requires mu > 0 and L > 0 (declared mu = "
       << rep.mu << ", L = " << rep.lipschitz << ")";
    if (enforcement == Enforcement::Error) throw AssumptionError(os.str());
    rep.warnings.push_back(os.str());
  }
  return rep;
}

Vector random_point(std::mt19937_64& rng, Eigen::Index dim, double radius) {
  std::uniform_real_distribution<double> unif(-radius, radius);
  Vector x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = unif(rng);
  return x;
}

}  // namespace

AdaptedProblem cop_to_inclusion(const CopSpec& spec, Enforcement enforcement) {
  if (!spec.f.differentiable()) {
    throw InvalidSpecError(
        "cop_to_inclusion: f must be differentiable by kind (quadratic/affine)");
  }
  ForwardOperatorSpec B = ForwardOperatorSpec::gradient(spec.f);
  AdapterReport rep = make_report(B, "(A1)", enforcement);
  MaximalOperatorSpec A = MaximalOperatorSpec::subdifferential(spec.g);
  Eigen::Index dim = common_dim(A.dim(), B.dim(), "cop_to_inclusion");
  return AdaptedProblem{ProblemInstance(std::move(A), std::move(B), dim),
                        std::move(rep)};
}

AdaptedProblem mvi_to_inclusion(const MviSpec& spec, Enforcement enforcement) {
  AdapterReport rep = make_report(spec.F, "(A) strong-monotonicity", enforcement);
  MaximalOperatorSpec A = MaximalOperatorSpec::subdifferential(spec.g);
  Eigen::Index dim = common_dim(A.dim(), spec.F.dim(), "mvi_to_inclusion");
  return AdaptedProblem{ProblemInstance(std::move(A), spec.F, dim),
                        std::move(rep)};
}

AdaptedProblem vi_to_inclusion(const ViSpec& spec, Enforcement enforcement) {
  AdapterReport rep = make_report(spec.F, "(A2)", enforcement);
  MaximalOperatorSpec A = MaximalOperatorSpec::normal_cone(spec.C);
  Eigen::Index dim = common_dim(A.dim(), spec.F.dim(), "vi_to_inclusion");
  return AdaptedProblem{ProblemInstance(std::move(A), spec.F, dim),
                        std::move(rep)};
}

void validate_lambda_window(AdapterReport& report, double lambda,
                            Enforcement enforcement) {
  if (report.lambda_window.contains(lambda)) return;
  std::ostringstream os;
  os << "lambda = " << lambda << " outside the sufficient window ("
     << report.lambda_window.lo << ", " << report.lambda_window.hi << ")";
  if (enforcement == Enforcement::Error) throw AssumptionError(os.str());
  report.warnings.push_back(os.str());
}

namespace {

template <typename ClosedForm>
ParityReport parity_against(const ProblemInstance& instance, double lambda,
                            int samples, std::uint64_t seed,
                            const ClosedForm& closed_form) {
  if (samples <= 0) {
    throw InputError("residual_parity_check: requires samples > 0");
  }
  std::mt19937_64 rng(seed);
  ParityReport rep;
  rep.samples = samples;
  for (int k = 0; k < samples; ++k) {
    Vector x = random_point(rng, instance.dim, 10.0);
    double dev = (fb_map(instance, lambda, x) - closed_form(x)).norm();
    rep.max_deviation = std::max(rep.max_deviation, dev);
  }
  return rep;
}

}  // namespace

ParityReport residual_parity_check(const CopSpec& spec, double lambda,
                                   int samples, std::uint64_t seed) {
  AdaptedProblem adapted = cop_to_inclusion(spec, Enforcement::Warn);
  return parity_against(adapted.instance, lambda, samples, seed,
                        [&](const Vector& x) {
                          return prox(spec.g, lambda,
                                      x - lambda * spec.f.gradient(x));
                        });
}

ParityReport residual_parity_check(const MviSpec& spec, double lambda,
                                   int samples, std::uint64_t seed) {
  AdaptedProblem adapted = mvi_to_inclusion(spec, Enforcement::Warn);
  return parity_against(
      adapted.instance, lambda, samples, seed, [&](const Vector& x) {
        return prox(spec.g, lambda, x - lambda * evaluate_forward(spec.F, x));
      });
}

ParityReport residual_parity_check(const ViSpec& spec, double lambda,
                                   int samples, std::uint64_t seed) {
  AdaptedProblem adapted = vi_to_inclusion(spec, Enforcement::Warn);
  return parity_against(
      adapted.instance, lambda, samples, seed, [&](const Vector& x) {
        return project(spec.C, x - lambda * evaluate_forward(spec.F, x));
      });
}

}  // namespace fbs
