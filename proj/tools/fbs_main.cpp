// Command-line front end: solve / sweep / verify / feasibility / bounds.

#include <CLI11.hpp>
#include <iostream>

#include "fbs/cli_runner.hpp"
#include "fbs/errors.hpp"
#include "fbs/feasibility.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fbs - forward-backward splitting solver with fixed-time dynamics"};
  app.require_subcommand(1);

  fbs::CliOptions opt;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")
        ->default_val(".");
    sub->add_option("--seed", opt.seed, "override the config seed");
    sub->add_flag("--override-feasibility", opt.override_feasibility,
                  "run even when lambda fails the feasibility gate");
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "solve one instance; writes a trace CSV and a JSON summary");
  CLI::App* sweep = app.add_subcommand(
      "sweep", "run over a parameter axis; writes an aggregated CSV");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the invariant suite on the configured instance");
  CLI::App* feasibility = app.add_subcommand(
      "feasibility", "classify the parameter regime and report the interval");
  CLI::App* bounds = app.add_subcommand(
      "bounds", "compute the settling-time bound report");
  for (CLI::App* sub : {solve, sweep, verify, feasibility, bounds}) {
    add_common(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return fbs::run_solve(opt);
    if (sweep->parsed()) return fbs::run_sweep(opt);
    if (verify->parsed()) return fbs::run_verify_command(opt);
    if (feasibility->parsed()) return fbs::run_feasibility_command(opt);
    if (bounds->parsed()) return fbs::run_bounds_command(opt);
  } catch (const fbs::InfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fbs::kExitInfeasible;
  } catch (const fbs::AssumptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fbs::kExitInfeasible;
  } catch (const fbs::WindowError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fbs::kExitInfeasible;
  } catch (const fbs::NonConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fbs::kExitDiverged;
  } catch (const fbs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fbs::kExitUsage;
  }
  return fbs::kExitUsage;
}
