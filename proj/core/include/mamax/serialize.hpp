#pragma once

#include <string>

#include "mamax/scenario.hpp"

namespace mamax {

// Canonical JSON forms used by run manifests and per-trial records. Doubles
// survive a round trip bit-exactly; parsers reject unknown keys and malformed
// structure with std::invalid_argument.

std::string to_json(const ScenarioConfig& config);
ScenarioConfig scenario_config_from_json(const std::string& text);

std::string to_json(const ScenarioInstance& instance);
ScenarioInstance instance_from_json(const std::string& text);

}  // namespace mamax
