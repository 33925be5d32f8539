#include "nrm/sample_path.hpp"

namespace nrm {

std::vector<std::int64_t> SamplePath::suffix_counts(std::int64_t t) const {
  int n = num_types_stored();
  std::vector<std::int64_t> d(n);
  for (int j = 0; j < n; ++j) d[j] = suffix_count(j, t);
  return d;
}

void draw_query(const InstanceSpec& spec, const CounterRng& rng, std::int64_t period,
                int& type_out, double& reward_out) {
  double u = rng.uniform(static_cast<std::uint64_t>(period), 0);
  int n = spec.num_types();
  double acc = 0.0;
  int j = n - 1;
  for (int k = 0; k < n; ++k) {
    acc += spec.types[k].probability;
    if (u < acc) {
      j = k;
      break;
    }
  }
  type_out = j;
  reward_out = spec.types[j].reward.quantile(rng.uniform(static_cast<std::uint64_t>(period), 1));
}

SamplePath sample_path(const InstanceSpec& spec, std::uint64_t seed, std::uint64_t replication) {
  spec.validate();
  CounterRng rng(seed, replication);
  std::int64_t T = spec.horizon;
  int n = spec.num_types();
  SamplePath path;
  path.rewards.resize(T);
  path.type_index.resize(T);
  for (std::int64_t t = 0; t < T; ++t)
    draw_query(spec, rng, t + 1, path.type_index[t], path.rewards[t]);
  path.suffix.assign(static_cast<std::size_t>(n) * (T + 2), 0);
  for (std::int64_t t = T; t >= 1; --t)
    for (int j = 0; j < n; ++j)
      path.suffix[static_cast<std::size_t>(j) * (T + 2) + t] =
          path.suffix[static_cast<std::size_t>(j) * (T + 2) + t + 1] +
          (path.type_index[t - 1] == j ? 1 : 0);
  return path;
}

}  // namespace nrm
