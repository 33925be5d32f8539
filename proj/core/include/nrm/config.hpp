#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nrm/instance.hpp"
#include "nrm/policy.hpp"

namespace nrm {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Simulate, Sweep, DualConv, Myopic, Solve };

ExperimentKind experiment_kind_from_name(const std::string& name);
std::string experiment_kind_name(ExperimentKind kind);

struct RunConfig {
  InstanceSpec instance;  // horizon filled from the experiment section
  ExperimentKind kind = ExperimentKind::Solve;
  std::vector<EstimatorConfig> policies;
  std::vector<std::int64_t> t_grid;  // sweep
  std::vector<std::int64_t> s_grid;  // dualconv / myopic
  std::int64_t horizon = 0;          // simulate / solve
  std::int64_t replications = 0;     // 0 = kind-specific default
  std::uint64_t seed = 1;
  int workers = 0;  // 0 = all cores
  std::int64_t effective_replications() const;
};

/// Parses and validates the JSON experiment document.  Unknown keys are
/// rejected with a path-qualified message; all violations throw
/// ConfigError (mapped to exit code 2 by the CLI).
RunConfig parse_config(const std::string& text);

/// Normalized JSON form; parse(serialize(cfg)) reproduces cfg exactly.
std::string serialize_config(const RunConfig& cfg);

}  // namespace nrm
