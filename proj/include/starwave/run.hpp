#pragma once

#include <string>
#include <vector>

#include "starwave/config.hpp"

namespace starwave {

struct RunResult {
    int exit_code = 0;                  // 0 ok, 2 verification failure
    std::vector<std::string> outputs;   // files written
};

// Executes one parsed configuration, writing outputs under out_dir ("." if
// empty). Throws std::runtime_error on I/O failures.
RunResult run(const RunConfig& cfg, const std::string& out_dir);

}  // namespace starwave
