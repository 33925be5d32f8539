#pragma once

#include <cstdint>
#include <vector>

#include "nrm/reward.hpp"

namespace nrm {

struct QueryType {
  std::vector<double> consumption;  // a_j, one entry per resource
  double probability = 0.0;         // p_j
  RewardDistribution reward = RewardDistribution::uniform(0.0, 1.0);
};

/// An instance template: capacities scale as C_i = ratio_i * T.
struct InstanceSpec {
  int resources = 0;
  std::vector<double> capacity_ratio;  // rho_i
  std::vector<QueryType> types;
  std::int64_t horizon = 0;  // T

  int num_types() const { return static_cast<int>(types.size()); }
  std::vector<double> initial_capacity() const;
  // Throws std::invalid_argument when probabilities do not sum to 1
  // (tolerance 1e-12 per type count), dimensions mismatch, or ratios
  // are not positive.
  void validate() const;

  bool single_resource_unit_demand() const;
};

// The degenerate three-resource instance used throughout the tests:
// a1=(0,1,1), a2=(1,0,1), a3=(1,1,0), uniform(0,1) rewards,
// p = (2e, 1+e, 2e)/(1+5e), capacity ratio 2e(1+e)/(1+5e) per resource.
InstanceSpec make_degenerate_triangle(double eps, std::int64_t horizon);

// Single resource, n=1, unit demand, uniform(0,1) rewards.
InstanceSpec make_single_uniform(double capacity_ratio, std::int64_t horizon);

}  // namespace nrm
