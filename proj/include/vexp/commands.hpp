#pragma once

#include <string>
#include <vector>

#include "vexp/report.hpp"

namespace vexp {

const std::vector<std::string>& command_names();

// Dispatches to the library operation behind `command`. Schema problems raise
// ConfigError; numerical failures propagate as vexp::Error.
Report run_command(const std::string& command, const RunConfig& config);

}  // namespace vexp
