#pragma once

#include <string>
#include <vector>

namespace tsr::presets {

// Named configurations for the simulation studies shipped with the tool.
std::vector<std::string> names();

// Config text for a preset, or nullptr when the name is unknown.
const std::string* find(const std::string& name);

}  // namespace tsr::presets
