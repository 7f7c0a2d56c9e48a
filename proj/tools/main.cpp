#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Max-min uplink rate with a movable-antenna receive array"};

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);

  mamax::cli::CliOverrides overrides;
  std::string experiment;
  app.add_option("--experiment", experiment,
                 "single | convergence | rate_vs_antennas | rate_vs_paths");
  int trials = 0;
  auto* trials_opt = app.add_option("--trials", trials, "Trials per scheme and sweep value");
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Root RNG seed");
  std::string out_dir;
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  bool audit = false;
  app.add_flag("--audit", audit, "Re-solve every recorded placement and compare");
  app.add_flag("--paper-scale", overrides.paper_scale,
               "Full-size swarm and trial budgets instead of the desk profile");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (!experiment.empty()) overrides.experiment = experiment;
  if (trials_opt->count() > 0) overrides.trials = trials;
  if (seed_opt->count() > 0) overrides.seed = seed;
  if (out_opt->count() > 0) overrides.output_dir = out_dir;

  try {
    mamax::cli::RunConfig cfg = mamax::cli::parse_config_file(config_path, overrides);
    return mamax::cli::run(cfg, audit, std::cout);
  } catch (const mamax::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
