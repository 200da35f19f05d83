#pragma once

#include <string>

#include "aict/scenario.hpp"

namespace aict {

/// Parses a scenario config (YAML; schema documented in the README and
/// the bundled files under configs/). Throws ConfigError with the file,
/// line and field on malformed input; the returned scenario is already
/// validated.
Scenario load_scenario(const std::string& path);

}  // namespace aict
