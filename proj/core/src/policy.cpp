#include "nrm/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nrm {

namespace {

double price_of(const QueryType& t, const std::vector<double>& mu) {
  double z = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) z += t.consumption[i] * mu[i];
  return z;
}

// Threshold width theta(s); degenerate horizons keep both boundary
// branches reachable.
double theta_of(double kappa1, std::int64_t s) {
  if (s <= 2) return 0.5;
  double sd = static_cast<double>(s);
  return 3.0 * kappa1 * std::sqrt(std::log(sd) / sd);
}

// Quantile estimators share the fluid re-solve and its cache; they
// differ only in the threshold width.
double quantile_estimate(const EstimatorConfig& cfg, PolicyState& state, int type,
                         const InstanceSpec& spec, double theta) {
  const auto& t = spec.types[type];
  std::int64_t s = spec.horizon - state.period + 1;
  if (s < 1) return t.reward.upper();
  if (!state.cache_valid || state.period - state.cache_period >= cfg.resolve_every) {
    try {
      FluidSolution sol = solve_fluid(spec, state.capacity, s,
                                      state.cache_valid ? &state.mu_cache : nullptr);
      state.mu_cache = std::move(sol.dual);
      state.q_cache = std::move(sol.quantiles);
      state.cache_period = state.period;
      state.cache_valid = true;
    } catch (const SolverError&) {
      return t.reward.upper();
    }
  }
  double q = state.q_cache[type];
  if (q >= 1.0 - theta) return t.reward.lower();
  if (q <= theta) return t.reward.upper();
  return t.reward.quantile(1.0 - q);
}

}  // namespace

PolicyKind policy_kind_from_name(const std::string& name) {
  if (name == "log2_fluid") return PolicyKind::Log2Fluid;
  if (name == "log_dual") return PolicyKind::LogDual;
  if (name == "static_bidprice") return PolicyKind::StaticBidprice;
  if (name == "resolve_plain") return PolicyKind::ResolvePlain;
  if (name == "greedy") return PolicyKind::Greedy;
  throw std::invalid_argument("unknown policy: " + name);
}

std::string policy_kind_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Log2Fluid: return "log2_fluid";
    case PolicyKind::LogDual: return "log_dual";
    case PolicyKind::StaticBidprice: return "static_bidprice";
    case PolicyKind::ResolvePlain: return "resolve_plain";
    case PolicyKind::Greedy: return "greedy";
  }
  return "unknown";
}

PolicyState make_policy_state(const InstanceSpec& spec) {
  PolicyState s;
  s.capacity = spec.initial_capacity();
  s.period = 1;
  return s;
}

double estimate_log2(const EstimatorConfig& cfg, PolicyState& state, int type,
                     const InstanceSpec& spec) {
  std::int64_t s = spec.horizon - state.period + 1;
  return quantile_estimate(cfg, state, type, spec, theta_of(cfg.kappa1, s));
}

double estimate_log(const EstimatorConfig& cfg, PolicyState& state, int type,
                    const InstanceSpec& spec) {
  const auto& t = spec.types[type];
  std::int64_t s = spec.horizon - state.period + 1;
  if (s < 1) return t.reward.upper();
  if (!state.cache_valid || state.period - state.cache_period >= cfg.resolve_every) {
    try {
      DualResult r = minimize_dual(spec, state.capacity, s, DualMode::Population, nullptr, 1,
                                   state.cache_valid ? &state.mu_cache : nullptr);
      state.mu_cache = std::move(r.mu);
      state.cache_period = state.period;
      state.cache_valid = true;
    } catch (const SolverError&) {
      return t.reward.upper();
    }
  }
  return price_of(t, state.mu_cache);
}

double estimate(const EstimatorConfig& cfg, PolicyState& state, int type,
                const InstanceSpec& spec) {
  const auto& t = spec.types[type];
  switch (cfg.kind) {
    case PolicyKind::Log2Fluid:
      return estimate_log2(cfg, state, type, spec);
    case PolicyKind::LogDual:
      return estimate_log(cfg, state, type, spec);
    case PolicyKind::ResolvePlain:
      return quantile_estimate(cfg, state, type, spec, 0.0);
    case PolicyKind::StaticBidprice: {
      if (!state.cache_valid) {
        try {
          FluidSolution sol = solve_fluid(spec, state.capacity, spec.horizon - state.period + 1);
          state.mu_cache = std::move(sol.dual);
          state.cache_valid = true;
          state.cache_period = state.period;
        } catch (const SolverError&) {
          return t.reward.upper();
        }
      }
      return price_of(t, state.mu_cache);
    }
    case PolicyKind::Greedy:
      return t.reward.lower();
  }
  return t.reward.upper();
}

bool decide(const EstimatorConfig& cfg, PolicyState& state, int type, double reward,
            const InstanceSpec& spec, double* m_hat_out) {
  const auto& t = spec.types[type];
  bool feasible = true;
  for (std::size_t i = 0; i < state.capacity.size(); ++i)
    if (state.capacity[i] + 1e-12 < t.consumption[i]) feasible = false;
  double m_hat = estimate(cfg, state, type, spec);
  if (m_hat_out) *m_hat_out = m_hat;
  bool accept = feasible && reward >= m_hat;
  if (accept) {
    for (std::size_t i = 0; i < state.capacity.size(); ++i)
      state.capacity[i] = std::max(state.capacity[i] - t.consumption[i], 0.0);
  }
  state.period += 1;
  return accept;
}

PolicyRun run_policy(const EstimatorConfig& cfg, const InstanceSpec& spec,
                     const SamplePath& path, bool keep_trace) {
  if (path.horizon() != spec.horizon)
    throw std::invalid_argument("run_policy: path horizon does not match the instance");
  PolicyState state = make_policy_state(spec);
  PolicyRun out;
  if (keep_trace) out.trace.reserve(path.horizon());
  for (std::int64_t t = 1; t <= path.horizon(); ++t) {
    int j = path.type_index[t - 1];
    double r = path.rewards[t - 1];
    double m_hat = 0.0;
    bool accept = decide(cfg, state, j, r, spec, &m_hat);
    if (accept) {
      out.collected_reward += r;
      out.accepted += 1;
    }
    if (keep_trace) out.trace.push_back({t, j, r, m_hat, accept});
  }
  return out;
}

}  // namespace nrm
