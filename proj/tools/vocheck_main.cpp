#include <iostream>

#include <CLI11.hpp>

#include "vocheck/runner.hpp"

using namespace vocheck;

int main(int argc, char** argv) {
  CLI::App app{"vocheck: numerical verification of variation-of-constants perturbation "
               "inequalities for consistent semigroup pairs"};

  std::string config_path, scenario, out_dir, format;
  std::uint64_t seed = 0;
  bool seed_set = false, list = false, list_json = false;
  double tol = 0.0, tmax = 0.0, lambda_max = 0.0;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--scenario", scenario, "scenario name (see --list)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed");
  app.add_option("--tol", tol, "verdict tolerance (> 0)");
  app.add_option("--tmax", tmax, "largest t; grid becomes tmax * {0.05, 0.25, 0.5, 1}");
  app.add_option("--lambda-max", lambda_max,
                 "largest lambda; grid becomes 4 points from omega+1 up to this value");
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--format", format, "report format: json, csv or both");
  app.add_flag("--list", list, "list registered scenario builders");
  app.add_flag("--json", list_json, "with --list: machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  seed_set = seed_opt->count() > 0;

  try {
    if (list) {
      std::cout << list_scenarios(list_json);
      return kExitPass;
    }

    RunConfig config;
    if (!config_path.empty()) config = load_run_config(config_path);
    if (!scenario.empty()) config.scenario = scenario;
    if (config.scenario.empty())
      throw UsageError("no scenario selected; use --config or --scenario (see --list)");
    if (seed_set) config.seed = seed;
    if (tol != 0.0) {
      if (!(tol > 0.0)) throw UsageError("--tol must be > 0");
      config.tol = tol;
    }
    if (tmax != 0.0) {
      if (!(tmax > 0.0)) throw UsageError("--tmax must be > 0");
      config.t_grid = {0.05 * tmax, 0.25 * tmax, 0.5 * tmax, tmax};
    }
    if (lambda_max != 0.0) config.lambda_grid = {};  // resolved against omega below
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!format.empty()) {
      if (format == "both")
        config.formats = {"json", "csv"};
      else if (format == "json" || format == "csv")
        config.formats = {format};
      else
        throw UsageError("--format must be json, csv or both");
    }

    if (lambda_max != 0.0) {
      // Needs the scenario's growth bound; build once to resolve the grid.
      const Scenario probe = build_scenario(config.scenario, config.params, config.seed);
      const double lo = probe.bound_omega + 1.0;
      if (!(lambda_max > lo))
        throw UsageError("--lambda-max must exceed omega + 1 = " + std::to_string(lo));
      config.lambda_grid = {lo, lo + (lambda_max - lo) / 4.0, lo + (lambda_max - lo) / 2.0,
                            lambda_max};
    }

    return run(config, std::cout);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n\n" << app.help() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecision;
  }
}
