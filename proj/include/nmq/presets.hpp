// presets.hpp — Built-in parameter sets

#pragma once

#include <string>
#include <vector>

#include "nmq/config.hpp"

namespace nmq {

struct Preset {
    std::string name;
    std::string description;
    std::string text;  // config file contents
    RunConfig config;
};

// Sorted by name.
const std::vector<Preset>& presets();

// Throws ConfigError naming the preset when it is unknown.
const Preset& find_preset(const std::string& name);

} // namespace nmq
