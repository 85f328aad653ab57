#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fbs {

// Exit-code contract of the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInfeasible = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitInvariantFailure = 4;

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool override_feasibility = false;
};

int run_solve(const CliOptions& opt);
int run_sweep(const CliOptions& opt);
int run_verify_command(const CliOptions& opt);
int run_feasibility_command(const CliOptions& opt);
int run_bounds_command(const CliOptions& opt);

}  // namespace fbs
