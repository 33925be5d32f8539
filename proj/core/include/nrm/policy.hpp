#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrm/fluid.hpp"
#include "nrm/instance.hpp"
#include "nrm/sample_path.hpp"

namespace nrm {

enum class PolicyKind {
  Log2Fluid,       // boundary-attracted quantile estimator from the re-solved fluid program
  LogDual,         // bid price a' mu from the re-solved population dual
  StaticBidprice,  // fluid dual solved once upfront, price frozen
  ResolvePlain,    // re-solved fluid quantile without the boundary thresholds
  Greedy           // accept anything feasible
};

struct EstimatorConfig {
  PolicyKind kind = PolicyKind::Log2Fluid;
  double kappa1 = 1.0;              // threshold constant for Log2Fluid
  std::int64_t resolve_every = 1;   // re-solve cadence; 1 = every period
};

PolicyKind policy_kind_from_name(const std::string& name);
std::string policy_kind_name(PolicyKind kind);

struct PolicyState {
  std::vector<double> capacity;  // c_t
  std::int64_t period = 1;       // t, 1-based
  // estimator cache: last dual point (warm start / static price) and
  // last fluid quantiles, tagged with the period they were solved at
  std::vector<double> mu_cache;
  std::vector<double> q_cache;
  std::int64_t cache_period = 0;
  bool cache_valid = false;
};

PolicyState make_policy_state(const InstanceSpec& spec);

/// Estimator dispatch: the reward threshold M̂ for a type-j query in the
/// current state.  Solver failures degrade to the always-reject
/// sentinel u_j rather than throwing.
double estimate(const EstimatorConfig& cfg, PolicyState& state, int type,
                const InstanceSpec& spec);
double estimate_log2(const EstimatorConfig& cfg, PolicyState& state, int type,
                     const InstanceSpec& spec);
double estimate_log(const EstimatorConfig& cfg, PolicyState& state, int type,
                    const InstanceSpec& spec);

/// One accept/reject decision; on accept the state's capacity is
/// depleted and in all cases the period advances.
bool decide(const EstimatorConfig& cfg, PolicyState& state, int type, double reward,
            const InstanceSpec& spec, double* m_hat_out = nullptr);

struct DecisionRecord {
  std::int64_t period;
  int type;
  double reward;
  double m_hat;
  bool accepted;
};

struct PolicyRun {
  double collected_reward = 0.0;
  std::int64_t accepted = 0;
  std::vector<DecisionRecord> trace;  // empty unless requested
};

PolicyRun run_policy(const EstimatorConfig& cfg, const InstanceSpec& spec,
                     const SamplePath& path, bool keep_trace = false);

}  // namespace nrm
