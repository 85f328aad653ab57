#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbs/fb_core.hpp"
#include "fbs/feasibility.hpp"

namespace fbs {

// min f(x) + g(x): smooth f (quadratic/affine kinds), prox-friendly g.
struct CopSpec {
  FunctionSpec f;
  FunctionSpec g;
};

// Find x*: <F(x*), x - x*> + g(x*) - g(x) >= 0 for all x.
struct MviSpec {
  ForwardOperatorSpec F;
  FunctionSpec g;
};

// Find x* in C: <F(x*), x - x*> >= 0 for all x in C.
struct ViSpec {
  ForwardOperatorSpec F;
  ConvexSetSpec C;
};

enum class Enforcement { Warn, Error };

struct AdapterReport {
  double mu = 0.0;         // forward operator modulus used by the window
  double lipschitz = 0.0;  // forward operator Lipschitz constant
  // Sufficient lambda window (0, 2 mu / L^2) of the source-problem theory;
  // empty when mu <= 0.
  LambdaInterval lambda_window{0.0, 0.0};
  bool assumptions_hold = false;
  std::vector<std::string> warnings;
};

struct AdaptedProblem {
  ProblemInstance instance;
  AdapterReport report;
};

// A = subdifferential(g) (resolvent = prox), B = gradient(f). Validates (A1):
// mu > 0 and L > 0 from f's moduli; violation throws under Enforcement::Error,
// otherwise lands in report.warnings.
AdaptedProblem cop_to_inclusion(const CopSpec& spec,
                                Enforcement enforcement = Enforcement::Warn);

// A = subdifferential(g), B = F.
AdaptedProblem mvi_to_inclusion(const MviSpec& spec,
                                Enforcement enforcement = Enforcement::Warn);

// A = normal cone of C, B = F. Validates (A2): mu > 0, L > 0.
AdaptedProblem vi_to_inclusion(const ViSpec& spec,
                               Enforcement enforcement = Enforcement::Warn);

// Checks lambda against the report's window; throws AssumptionError under
// Enforcement::Error, otherwise appends a warning to the report.
void validate_lambda_window(AdapterReport& report, double lambda,
                            Enforcement enforcement);

struct ParityReport {
  double max_deviation = 0.0;
  int samples = 0;
};

// Regression guard: the adapter's fb_map matches the source problem's closed
// form (prox/projection composition) on sampled points.
ParityReport residual_parity_check(const CopSpec& spec, double lambda,
                                   int samples, std::uint64_t seed = 1234);
ParityReport residual_parity_check(const MviSpec& spec, double lambda,
                                   int samples, std::uint64_t seed = 1234);
ParityReport residual_parity_check(const ViSpec& spec, double lambda,
                                   int samples, std::uint64_t seed = 1234);

}  // namespace fbs
