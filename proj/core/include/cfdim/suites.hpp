#pragma once

#include <string>
#include <vector>

#include "cfdim/report.hpp"

namespace cfdim {

// Registered suites in run order; "all" runs every one of them.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

// Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& name, const RunConfig& config);

}  // namespace cfdim
