#pragma once

#include <string>

#include "nrm/config.hpp"

namespace nrm {

/// Executes the configured experiment and writes `results.csv` and
/// `meta.json` into `out_dir`.  Returns the process exit code:
/// 0 success, 1 solver/runtime failure (partial results are flushed
/// with a partial=true marker), 2 for configuration problems.
int run(const RunConfig& cfg, const std::string& out_dir);

}  // namespace nrm
