#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fbs/dynamics.hpp"
#include "fbs/problems.hpp"

namespace fbs {

struct InvariantResult {
  std::string name;
  long samples = 0;
  double max_violation = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::vector<InvariantResult> entries;
  bool all_pass() const;
};

struct VerifySettings {
  std::uint64_t seed = 20240801;
  double sample_radius = 10.0;
  int operator_samples = 200;
  int interval_samples = 10000;
  int contraction_pairs = 1000;
  int field_samples = 200;
  // Lyapunov finite-difference check.
  double fd_dt = 1e-5;
  long fd_steps = 4000;
  // Settling-time cap check.
  std::vector<double> settling_radii = {1e-2, 1.0, 1e2, 1e4, 1e6};
  double settling_eps = 1e-5;
  double settling_dt = 1e-3;
  // Discrete consistency check.
  double consistency_eps = 1e-6;
  double consistency_gamma_hi = 0.5;
};

// Problem-class context for the adapter invariants; monostate = raw inclusion.
using SourceSpec = std::variant<std::monostate, CopSpec, MviSpec, ViSpec>;

// Executes the full invariant suite on one instance. Entries that cannot run
// (violated gates, missing closed forms) are reported as failures or skipped
// with a note rather than thrown.
VerifyReport run_verify(const ProblemInstance& P, double lambda,
                        const ScalingParams& scaling,
                        std::optional<double> nu = std::nullopt,
                        double delta_floor = kDefaultDeltaFloor,
                        const VerifySettings& settings = VerifySettings{},
                        const SourceSpec& source = std::monostate{});

}  // namespace fbs
