#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nrm/instance.hpp"
#include "nrm/policy.hpp"

namespace nrm {

struct RegretRow {
  std::string policy;
  std::int64_t horizon = 0;
  double mean_regret = 0.0;  // vs the hindsight LP benchmark
  double std_error = 0.0;
  std::int64_t replications = 0;
  double mean_regret_integer = 0.0;  // vs the exact integer optimum
  bool has_integer = false;
};

struct RegretTable {
  std::vector<RegretRow> rows;
};

/// Monte-Carlo regret estimates under common random numbers: one sample
/// path per replication index, shared by every policy and by the
/// benchmark.  Aggregation is a deterministic fold ordered by
/// replication, so worker count never changes the result.
RegretTable estimate_regret(const InstanceSpec& templ, const std::vector<EstimatorConfig>& policies,
                            const std::vector<std::int64_t>& horizon_grid,
                            std::int64_t replications, std::uint64_t seed, int workers);

struct GrowthFit {
  double coefficient = 0.0;  // a in  y ~ a * x^b
  double exponent = 0.0;     // b
  double r_squared = 0.0;
  std::vector<double> residuals;  // log-space residuals, one per used point
  int points_used = 0;
};

/// Least squares on (log x, log y); nonpositive y values are skipped.
/// Throws std::runtime_error when fewer than 4 usable points remain.
GrowthFit fit_powerlaw(const std::vector<double>& x, const std::vector<double>& y);

GrowthFit fit_growth(const RegretTable& table, const std::string& policy);

struct DualGapRow {
  std::int64_t scale = 0;              // s
  std::vector<double> mean_sq_gap;     // per type: E[(a'(mu_tilde - mu_hat))^2]
  std::vector<double> std_error;       // per type
  std::int64_t replications = 0;
};

struct DualGapResult {
  std::vector<DualGapRow> rows;
  double slope = 0.0;  // log-log slope of the type-averaged gap
};

/// Convergence of the sample dual minimizer to the population one as
/// the suffix length grows.
DualGapResult dual_convergence_experiment(const InstanceSpec& templ,
                                          const std::vector<std::int64_t>& scale_grid,
                                          std::int64_t replications, std::uint64_t seed,
                                          int workers);

struct MyopicRow {
  std::int64_t scale = 0;  // s
  double mean_loss = 0.0;
  double std_error = 0.0;
  std::int64_t replications = 0;
};

struct MyopicResult {
  std::vector<MyopicRow> rows;
  double slope = 0.0;  // log-log slope of the mean loss
  EstimatorConfig policy;
};

/// One-period loss of the re-solving quantile policy at a state on the
/// nominal capacity trajectory, measured against the semi-fluid
/// relaxation.  The current query's reward is integrated in closed form
/// conditional on the sampled suffix counts, which removes the dominant
/// variance term.
MyopicResult myopic_decay_experiment(const InstanceSpec& templ,
                                     const std::vector<std::int64_t>& scale_grid,
                                     std::int64_t replications, std::uint64_t seed, int workers,
                                     const EstimatorConfig& policy = {});

}  // namespace nrm
