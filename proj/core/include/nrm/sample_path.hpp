#pragma once

#include <cstdint>
#include <vector>

#include "nrm/instance.hpp"
#include "nrm/rng.hpp"

namespace nrm {

/// One realized arrival sequence.  suffix_count(j, t) counts type-j
/// arrivals in periods {t, ..., T} (1-based t).
struct SamplePath {
  std::vector<double> rewards;   // r_t, length T
  std::vector<int> type_index;   // j_t in [0, n), length T
  std::vector<std::int64_t> suffix;  // n x (T+2), column-major by period

  std::int64_t horizon() const { return static_cast<std::int64_t>(rewards.size()); }
  int num_types_stored() const {
    return horizon() ? static_cast<int>(suffix.size() / (horizon() + 2)) : 0;
  }
  std::int64_t suffix_count(int j, std::int64_t t) const {
    return suffix[static_cast<std::size_t>(j) * (horizon() + 2) + t];
  }
  std::vector<std::int64_t> suffix_counts(std::int64_t t) const;
};

/// Draw the path for one replication.  Identical (spec, seed, replication)
/// yields a bit-identical path; policies compared under common random
/// numbers share the replication index.
SamplePath sample_path(const InstanceSpec& spec, std::uint64_t seed, std::uint64_t replication);

// Single query draw from the same stream, exposed for streaming callers.
void draw_query(const InstanceSpec& spec, const CounterRng& rng, std::int64_t period,
                int& type_out, double& reward_out);

}  // namespace nrm
