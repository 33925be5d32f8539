#include "nrm/offline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrm/fluid.hpp"
#include "nrm/simplex.hpp"

namespace nrm {

namespace {

// Greedy fractional knapsack in decreasing value-density order.  The
// summation order matches offline_integer's top-k sum so the two values
// agree bit-for-bit on unit-demand instances with integer capacity.
OfflineResult knapsack_lp(const InstanceSpec& spec, const SamplePath& path,
                          std::int64_t from, std::int64_t count, double capacity) {
  OfflineResult out;
  out.x.assign(count, 0.0);
  std::vector<std::int64_t> order;
  order.reserve(count);
  auto weight = [&](std::int64_t k) {
    return spec.types[path.type_index[from - 1 + k]].consumption[0];
  };
  auto density = [&](std::int64_t k) { return path.rewards[from - 1 + k] / weight(k); };
  double free_value = 0.0;
  for (std::int64_t k = 0; k < count; ++k) {
    if (weight(k) > 0.0) {
      order.push_back(k);
    } else {
      out.x[k] = 1.0;
      free_value += path.rewards[from - 1 + k];
    }
  }
  std::sort(order.begin(), order.end(), [&](std::int64_t a, std::int64_t b) {
    double da = density(a), db = density(b);
    if (da != db) return da > db;
    return a < b;
  });
  double cap = capacity;
  double value = 0.0;
  double mu = 0.0;
  bool cut = false;
  for (std::int64_t k : order) {
    if (cut) break;
    double a = weight(k);
    if (a <= cap) {
      out.x[k] = 1.0;
      value += path.rewards[from - 1 + k];
      cap -= a;
      if (cap <= 0.0) {
        cut = true;
        mu = density(k);  // any price in the bracketing interval is optimal
      }
    } else {
      double frac = cap / a;
      if (frac > 0.0) {
        out.x[k] = frac;
        value += path.rewards[from - 1 + k] * frac;
      }
      cap = 0.0;
      cut = true;
      mu = density(k);
    }
  }
  out.lp_value = value + free_value;
  out.dual = {cut ? mu : 0.0};
  return out;
}

double dual_objective(const InstanceSpec& spec, const SamplePath& path, std::int64_t from,
                      std::int64_t count, const std::vector<double>& capacity,
                      const std::vector<double>& mu) {
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) v += capacity[i] * mu[i];
  for (std::int64_t k = 0; k < count; ++k) {
    const auto& t = spec.types[path.type_index[from - 1 + k]];
    double z = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) z += t.consumption[i] * mu[i];
    v += std::max(path.rewards[from - 1 + k] - z, 0.0);
  }
  return v;
}

}  // namespace

OfflineResult offline_lp(const InstanceSpec& spec, const SamplePath& path,
                         std::int64_t from_period, const std::vector<double>& capacity) {
  for (double c : capacity)
    if (c < 0.0) throw std::invalid_argument("offline_lp: capacity must be nonnegative");
  std::int64_t T = path.horizon();
  if (from_period < 1 || from_period > T + 1)
    throw std::invalid_argument("offline_lp: from_period out of range");
  std::int64_t count = T - from_period + 1;
  OfflineResult out;
  if (count == 0) {
    out.dual.assign(capacity.size(), 0.0);
    return out;
  }

  if (spec.resources == 1) {
    out = knapsack_lp(spec, path, from_period, count, capacity[0]);
  } else {
    std::vector<double> rewards(count);
    for (std::int64_t k = 0; k < count; ++k) rewards[k] = path.rewards[from_period - 1 + k];
    auto column = [&](std::int64_t k) -> const double* {
      return spec.types[path.type_index[from_period - 1 + k]].consumption.data();
    };
    std::vector<double> warm;
    try {
      warm = minimize_dual(spec, capacity, count + 1, DualMode::Population).mu;
    } catch (const SolverError&) {
      warm.assign(capacity.size(), 0.0);
    }
    LpSolution lp = solve_packing_lp(spec.resources, count, column, rewards, capacity, &warm);
    if (!lp.ok) throw SolverError("offline_lp: simplex hit the iteration cap", 1.0);
    out.lp_value = lp.value;
    out.x = std::move(lp.x);
    out.dual = std::move(lp.dual);
    DualDomain dom = DualDomain::for_instance(spec);
    std::vector<double> clipped(out.dual);
    for (std::size_t i = 0; i < clipped.size(); ++i) clipped[i] = std::min(clipped[i], dom.gamma[i]);
    if (dual_objective(spec, path, from_period, count, capacity, clipped) <=
        dual_objective(spec, path, from_period, count, capacity, out.dual) + 1e-12)
      out.dual = clipped;
  }

  out.duality_gap =
      dual_objective(spec, path, from_period, count, capacity, out.dual) - out.lp_value;
  if (from_period == 1 && spec.single_resource_unit_demand())
    out.integer_value = offline_integer(spec, path, capacity);
  return out;
}

double offline_integer(const InstanceSpec& spec, const SamplePath& path,
                       const std::vector<double>& capacity) {
  std::int64_t T = path.horizon();
  if (spec.single_resource_unit_demand()) {
    auto k = static_cast<std::int64_t>(std::floor(capacity[0] + 1e-12));
    k = std::min(k, T);
    if (k <= 0) return 0.0;
    std::vector<double> r(path.rewards);
    std::sort(r.begin(), r.end(), std::greater<>());
    double v = 0.0;
    for (std::int64_t i = 0; i < k; ++i) v += r[i];
    return v;
  }
  if (T > 20)
    throw UnsupportedInstance("offline_integer: exhaustive search limited to T <= 20");
  int m = spec.resources;
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << T); ++mask) {
    double v = 0.0;
    std::vector<double> load(m, 0.0);
    bool ok = true;
    for (std::int64_t t = 0; t < T && ok; ++t) {
      if (!(mask & (1u << t))) continue;
      const auto& a = spec.types[path.type_index[t]].consumption;
      for (int i = 0; i < m; ++i) {
        load[i] += a[i];
        if (load[i] > capacity[i] + 1e-9) ok = false;
      }
      v += path.rewards[t];
    }
    if (ok) best = std::max(best, v);
  }
  return best;
}

SandwichResult dual_sandwich_check(const InstanceSpec& spec, const SamplePath& path,
                                   std::int64_t from_period, const std::vector<double>& capacity,
                                   const std::vector<double>& consumption) {
  std::vector<double> reduced(capacity);
  for (std::size_t i = 0; i < reduced.size(); ++i) {
    reduced[i] -= consumption[i];
    if (reduced[i] < -1e-12)
      throw std::invalid_argument("dual_sandwich_check: capacity must cover the bundle");
    reduced[i] = std::max(reduced[i], 0.0);
  }
  OfflineResult full = offline_lp(spec, path, from_period, capacity);
  OfflineResult less = offline_lp(spec, path, from_period, reduced);
  SandwichResult out;
  out.marginal = full.lp_value - less.lp_value;
  out.lower = 0.0;
  out.upper = 0.0;
  for (std::size_t i = 0; i < consumption.size(); ++i) {
    out.lower += consumption[i] * full.dual[i];
    out.upper += consumption[i] * less.dual[i];
  }
  return out;
}

}  // namespace nrm
