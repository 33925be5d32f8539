#include "nrm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "nrm/offline.hpp"
#include "nrm/rng.hpp"
#include "nrm/sample_path.hpp"

namespace nrm {

namespace {

// Static work split over [0, count); results must be written to
// per-index slots so the fold stays deterministic.
template <class Fn>
void parallel_for(std::int64_t count, int workers, Fn&& fn) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(workers, count)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::int64_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  MeanSe out;
  std::int64_t n = static_cast<std::int64_t>(v.size());
  if (n == 0) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double x : v) ss += (x - out.mean) * (x - out.mean);
  out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return CounterRng::mix(seed + 0x9e3779b97f4a7c15ULL * (salt + 1));
}

}  // namespace

RegretTable estimate_regret(const InstanceSpec& templ, const std::vector<EstimatorConfig>& policies,
                            const std::vector<std::int64_t>& horizon_grid,
                            std::int64_t replications, std::uint64_t seed, int workers) {
  if (replications < 2) throw std::invalid_argument("estimate_regret: need at least 2 replications");
  RegretTable table;
  std::size_t np = policies.size();
  for (std::int64_t T : horizon_grid) {
    InstanceSpec spec = templ;
    spec.horizon = T;
    spec.validate();
    std::vector<double> capacity = spec.initial_capacity();
    bool has_int = spec.single_resource_unit_demand();

    std::vector<std::vector<double>> regret_lp(np, std::vector<double>(replications));
    std::vector<std::vector<double>> regret_int(np, std::vector<double>(replications));
    parallel_for(replications, workers, [&](std::int64_t rep) {
      SamplePath path = sample_path(spec, seed, static_cast<std::uint64_t>(rep));
      OfflineResult bench = offline_lp(spec, path, 1, capacity);
      double bench_int = has_int ? offline_integer(spec, path, capacity) : 0.0;
      for (std::size_t p = 0; p < np; ++p) {
        PolicyRun run = run_policy(policies[p], spec, path);
        regret_lp[p][rep] = bench.lp_value - run.collected_reward;
        if (has_int) regret_int[p][rep] = bench_int - run.collected_reward;
      }
    });

    for (std::size_t p = 0; p < np; ++p) {
      MeanSe lp = mean_se(regret_lp[p]);
      RegretRow row;
      row.policy = policy_kind_name(policies[p].kind);
      row.horizon = T;
      row.mean_regret = lp.mean;
      row.std_error = lp.se;
      row.replications = replications;
      row.has_integer = has_int;
      if (has_int) row.mean_regret_integer = mean_se(regret_int[p]).mean;
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

GrowthFit fit_powerlaw(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] > 0.0 && x[i] > 0.0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  int n = static_cast<int>(lx.size());
  if (n < 4) throw std::runtime_error("fit_powerlaw: fewer than 4 positive points");
  double sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  GrowthFit fit;
  fit.exponent = sxy / sxx;
  fit.coefficient = std::exp(my - fit.exponent * mx);
  fit.points_used = n;
  double ssr = 0.0;
  fit.residuals.resize(n);
  for (int i = 0; i < n; ++i) {
    double r = ly[i] - (my + fit.exponent * (lx[i] - mx));
    fit.residuals[i] = r;
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  return fit;
}

GrowthFit fit_growth(const RegretTable& table, const std::string& policy) {
  std::vector<double> x, y;
  for (const auto& row : table.rows) {
    if (row.policy != policy) continue;
    x.push_back(static_cast<double>(row.horizon));
    y.push_back(row.mean_regret);
  }
  return fit_powerlaw(x, y);
}

DualGapResult dual_convergence_experiment(const InstanceSpec& templ,
                                          const std::vector<std::int64_t>& scale_grid,
                                          std::int64_t replications, std::uint64_t seed,
                                          int workers) {
  DualGapResult out;
  int n = templ.num_types();
  std::vector<double> agg_x, agg_y;
  for (std::int64_t s : scale_grid) {
    if (s < 2) throw std::invalid_argument("dual_convergence_experiment: s must be >= 2");
    InstanceSpec spec = templ;
    spec.horizon = s - 1;  // the sample dual sees s-1 future queries
    spec.validate();
    std::vector<double> capacity(spec.resources);
    for (int i = 0; i < spec.resources; ++i)
      capacity[i] = spec.capacity_ratio[i] * static_cast<double>(s);
    DualResult pop = minimize_dual(spec, capacity, s, DualMode::Population);

    std::uint64_t seed_s = derive_seed(seed, static_cast<std::uint64_t>(s));
    std::vector<std::vector<double>> gaps(n, std::vector<double>(replications));
    parallel_for(replications, workers, [&](std::int64_t rep) {
      SamplePath path = sample_path(spec, seed_s, static_cast<std::uint64_t>(rep));
      DualResult smp = minimize_dual(spec, capacity, s, DualMode::Sample, &path, 1, &pop.mu);
      for (int j = 0; j < n; ++j) {
        double g = 0.0;
        for (int i = 0; i < spec.resources; ++i)
          g += spec.types[j].consumption[i] * (smp.mu[i] - pop.mu[i]);
        gaps[j][rep] = g * g;
      }
    });

    DualGapRow row;
    row.scale = s;
    row.replications = replications;
    double avg = 0.0;
    for (int j = 0; j < n; ++j) {
      MeanSe ms = mean_se(gaps[j]);
      row.mean_sq_gap.push_back(ms.mean);
      row.std_error.push_back(ms.se);
      avg += ms.mean;
    }
    avg /= n;
    agg_x.push_back(static_cast<double>(s));
    agg_y.push_back(avg);
    out.rows.push_back(std::move(row));
  }
  out.slope = fit_powerlaw(agg_x, agg_y).exponent;
  return out;
}

MyopicResult myopic_decay_experiment(const InstanceSpec& templ,
                                     const std::vector<std::int64_t>& scale_grid,
                                     std::int64_t replications, std::uint64_t seed, int workers,
                                     const EstimatorConfig& policy) {
  MyopicResult out;
  out.policy = policy;
  int n = templ.num_types();
  std::vector<double> agg_x, agg_y;
  for (std::int64_t s : scale_grid) {
    if (s < 2) throw std::invalid_argument("myopic_decay_experiment: s must be >= 2");
    InstanceSpec spec = templ;
    spec.horizon = s;
    spec.validate();
    std::vector<double> capacity(spec.resources);
    for (int i = 0; i < spec.resources; ++i)
      capacity[i] = spec.capacity_ratio[i] * static_cast<double>(s);

    // Estimator thresholds at the nominal state (c = rho * s, s left).
    PolicyState state = make_policy_state(spec);
    std::vector<double> m_hat(n), acc(n), reward_if_accept(n);
    std::vector<bool> feasible(n);
    for (int j = 0; j < n; ++j) {
      m_hat[j] = estimate(policy, state, j, spec);
      const auto& t = spec.types[j];
      bool ok = true;
      for (int i = 0; i < spec.resources; ++i)
        if (capacity[i] + 1e-12 < t.consumption[i]) ok = false;
      feasible[j] = ok;
      acc[j] = ok ? t.reward.accept_prob(m_hat[j]) : 0.0;
      reward_if_accept[j] = ok ? t.reward.mean_tail(m_hat[j]) : 0.0;
    }

    std::uint64_t seed_s = derive_seed(seed, 0x6d79ULL + static_cast<std::uint64_t>(s));
    std::vector<double> losses(replications);
    parallel_for(replications, workers, [&](std::int64_t rep) {
      // Sample only the suffix type counts; the current query's type and
      // reward are integrated in closed form.
      CounterRng rng(seed_s, static_cast<std::uint64_t>(rep));
      std::vector<double> d(n, 0.0);
      for (std::int64_t t = 1; t < s; ++t) {
        double u = rng.uniform(static_cast<std::uint64_t>(t), 0);
        double cum = 0.0;
        int j = n - 1;
        for (int k = 0; k < n; ++k) {
          cum += spec.types[k].probability;
          if (u < cum) {
            j = k;
            break;
          }
        }
        d[j] += 1.0;
      }
      double keep_value = solve_semifluid(spec, d, capacity).objective;
      double loss = 0.0;
      std::vector<double> d_plus(d), c_minus(capacity);
      for (int j = 0; j < n; ++j) {
        double pj = spec.types[j].probability;
        d_plus[j] += 1.0;
        double before = solve_semifluid(spec, d_plus, capacity).objective;
        d_plus[j] -= 1.0;
        double after_accept = 0.0;
        if (acc[j] > 0.0) {
          for (int i = 0; i < spec.resources; ++i)
            c_minus[i] = capacity[i] - spec.types[j].consumption[i];
          after_accept = solve_semifluid(spec, d, c_minus).objective;
        }
        loss += pj * (before - reward_if_accept[j] - acc[j] * after_accept -
                      (1.0 - acc[j]) * keep_value);
      }
      losses[rep] = loss;
    });

    MeanSe ms = mean_se(losses);
    out.rows.push_back({s, ms.mean, ms.se, replications});
    agg_x.push_back(static_cast<double>(s));
    agg_y.push_back(ms.mean);
  }
  out.slope = fit_powerlaw(agg_x, agg_y).exponent;
  return out;
}

}  // namespace nrm
