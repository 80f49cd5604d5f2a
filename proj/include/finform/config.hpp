#pragma once

#include <iosfwd>
#include <string>

#include "finform/scenarios.hpp"

namespace finform {

/// Flat `key = value` scenario config with sections
/// [plant] [phi] [disturbance] [adapt] [sim] [expected] [eta].
/// `[plant] builtin = <name>` starts from the registry scenario and applies
/// overrides; otherwise the plant is built from the expression vocabulary.
/// Unknown sections or keys are errors (ConfigError carries the line number).
Scenario load_scenario_config(std::istream& is);
Scenario load_scenario_config_file(const std::string& path);

}  // namespace finform
