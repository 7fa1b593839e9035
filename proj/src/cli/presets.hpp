#pragma once

#include <functional>
#include <string>
#include <vector>

#include "run.hpp"

namespace spectrakit::cli {

struct Preset {
    std::string name;
    std::string description;
    std::function<Table()> build;
};

const std::vector<Preset>& presets();
const Preset& find_preset(const std::string& name);  // throws UsageError

}  // namespace spectrakit::cli
