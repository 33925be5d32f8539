#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nrm/instance.hpp"
#include "nrm/sample_path.hpp"

namespace nrm {

class UnsupportedInstance : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hindsight LP benchmark on one sample path (suffix).
struct OfflineResult {
  double lp_value = 0.0;
  std::vector<double> x;     // one fraction per suffix period
  std::vector<double> dual;  // row prices, inside the dual box
  std::optional<double> integer_value;
  double duality_gap = 0.0;  // dual objective minus lp_value
};

/// LP relaxation of the hindsight optimum over periods
/// {from_period, ..., T} with the given remaining capacity.
OfflineResult offline_lp(const InstanceSpec& spec, const SamplePath& path,
                         std::int64_t from_period, const std::vector<double>& capacity);

/// Exact integer hindsight optimum.  Closed form for single-resource
/// unit-demand instances; exhaustive search when T <= 20; otherwise
/// throws UnsupportedInstance.
double offline_integer(const InstanceSpec& spec, const SamplePath& path,
                       const std::vector<double>& capacity);

struct SandwichResult {
  double lower = 0.0;     // a' mu at capacity c
  double marginal = 0.0;  // V(c) - V(c - a)
  double upper = 0.0;     // a' mu at capacity c - a
};

/// Brackets the marginal LP value of one query's consumption bundle
/// between the bid prices at the two capacity levels.
SandwichResult dual_sandwich_check(const InstanceSpec& spec, const SamplePath& path,
                                   std::int64_t from_period, const std::vector<double>& capacity,
                                   const std::vector<double>& consumption);

}  // namespace nrm
