#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mamax/pso.hpp"
#include "mamax/scenario.hpp"
#include "mamax/schemes.hpp"

namespace mamax::cli {

// Malformed or inconsistent run configuration; maps to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Single, Convergence, RateVsAntennas, RateVsPaths };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);

struct RunConfig {
  ScenarioConfig scenario;
  PsoParams pso;
  std::vector<SchemeKind> schemes = {SchemeKind::MovableOptimized, SchemeKind::FixedUPA,
                                     SchemeKind::AlternatingPositionSelection};
  ExperimentKind experiment = ExperimentKind::Single;
  std::vector<int> sweep_values;  // required for the sweep experiments
  int num_trials = 20;
  std::string output_dir = "out";
  std::string scale = "desk";

  void validate() const;  // throws ConfigError
};

// Command-line overrides applied on top of the config file.
struct CliOverrides {
  std::optional<std::string> experiment;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool paper_scale = false;
};

// Parses the JSON run configuration. Sections: "scenario", "pso", "run".
// scenario.num_users and scenario.num_antennas are required; every other key
// is optional and defaults to the reference evaluation setup, with the swarm
// budget (pso.swarm_size, pso.max_iters) and run.num_trials resolved by the
// scale profile: "desk" (50/100/20, the default) or "paper" (200/300/1000).
// Unknown keys are hard errors. An empty or whitespace-only document is
// treated as an empty object.
RunConfig parse_config_text(const std::string& text, const CliOverrides& overrides = {});
RunConfig parse_config_file(const std::string& path, const CliOverrides& overrides = {});

}  // namespace mamax::cli
