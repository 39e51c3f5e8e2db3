#pragma once

#include "rarl/scenario.hpp"

#include <filesystem>
#include <string>

namespace rarl {

/// Parses a JSON scenario document. Missing keys take the defaults of the
/// declared `kind`; unknown keys, out-of-venue positions and non-grid FGW
/// starts are rejected with a ConfigError naming the key.
ScenarioConfig parse_config(const std::string& text);

/// Reads and parses a file; IO failures surface as ConfigError with the path.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved JSON document (every field explicit) that parses back to
/// an equal config.
std::string serialize_config(const ScenarioConfig& config);

}  // namespace rarl
