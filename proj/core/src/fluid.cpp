#include "nrm/fluid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nrm/simplex.hpp"

namespace nrm {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double type_price(const QueryType& t, const std::vector<double>& mu) {
  double z = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) z += t.consumption[i] * mu[i];
  return z;
}

// minimize  c' mu + sum_j w_j * E[(r_j - a_j' mu)^+]  over the box [0, gamma]
struct WeightedDual {
  std::vector<double> mu;
  double value = 0.0;
  double residual = 0.0;
};

struct DualProblem {
  const InstanceSpec* spec;
  std::vector<double> c;
  std::vector<double> w;
  std::vector<double> gamma;

  double eval(const std::vector<double>& mu) const {
    double v = dot(c, mu);
    for (int j = 0; j < spec->num_types(); ++j) {
      if (w[j] == 0.0) continue;
      v += w[j] * spec->types[j].reward.mean_above(type_price(spec->types[j], mu));
    }
    return v;
  }
  void grad(const std::vector<double>& mu, std::vector<double>& g) const {
    g = c;
    for (int j = 0; j < spec->num_types(); ++j) {
      if (w[j] == 0.0) continue;
      const auto& t = spec->types[j];
      double tail = t.reward.tail_prob(type_price(t, mu));
      if (tail == 0.0) continue;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= w[j] * tail * t.consumption[i];
    }
  }
  void hess(const std::vector<double>& mu, std::vector<double>& H) const {
    std::size_t m = mu.size();
    std::fill(H.begin(), H.end(), 0.0);
    for (int j = 0; j < spec->num_types(); ++j) {
      if (w[j] == 0.0) continue;
      const auto& t = spec->types[j];
      if (t.reward.kind() == RewardKind::PointMass) continue;
      double f = t.reward.density(type_price(t, mu));
      if (f <= 0.0 || !std::isfinite(f)) continue;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
          H[i * m + k] += w[j] * f * t.consumption[i] * t.consumption[k];
    }
  }
};

double scalar_subgrad(const DualProblem& P, double mu) {
  double g = P.c[0];
  for (int j = 0; j < P.spec->num_types(); ++j) {
    if (P.w[j] == 0.0) continue;
    const auto& t = P.spec->types[j];
    double a = t.consumption[0];
    if (a == 0.0) continue;
    g -= P.w[j] * a * t.reward.tail_prob(a * mu);
  }
  return g;
}

WeightedDual minimize_scalar(const DualProblem& P) {
  WeightedDual out;
  double lo = 0.0, hi = P.gamma[0];
  if (scalar_subgrad(P, 0.0) >= 0.0) {
    out.mu = {0.0};
  } else if (scalar_subgrad(P, hi) <= 0.0) {
    out.mu = {hi};
  } else {
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
      double mid = 0.5 * (lo + hi);
      if (scalar_subgrad(P, mid) < 0.0)
        lo = mid;
      else
        hi = mid;
      if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
    }
    out.mu = {0.5 * (lo + hi)};
  }
  out.value = P.eval(out.mu);
  // Optimality on the box for a piecewise-smooth convex objective:
  // the one-sided subgradients around mu must bracket zero (or point
  // inward at a bound).
  double scale = std::max(1.0, std::abs(P.c[0]));
  double eps = 1e-10 * std::max(1.0, P.gamma[0]);
  double gl = scalar_subgrad(P, std::max(0.0, out.mu[0] - eps));
  double gr = scalar_subgrad(P, std::min(P.gamma[0], out.mu[0] + eps));
  double res = 0.0;
  if (out.mu[0] > eps) res = std::max(res, gl);           // left slope must be <= 0
  if (out.mu[0] < P.gamma[0] - eps) res = std::max(res, -gr);  // right slope must be >= 0
  out.residual = std::max(res, 0.0) / scale;
  return out;
}

// Solve (H + lam I) d = -g restricted to the free index set.
bool solve_newton(const std::vector<double>& H, const std::vector<double>& g,
                  const std::vector<int>& free, double lam, std::vector<double>& d,
                  std::size_t m) {
  int f = static_cast<int>(free.size());
  std::vector<double> A(f * f), b(f);
  for (int r = 0; r < f; ++r) {
    b[r] = -g[free[r]];
    for (int cix = 0; cix < f; ++cix)
      A[r * f + cix] = H[free[r] * m + free[cix]] + (r == cix ? lam : 0.0);
  }
  for (int p = 0; p < f; ++p) {
    int piv = p;
    for (int i = p + 1; i < f; ++i)
      if (std::abs(A[i * f + p]) > std::abs(A[piv * f + p])) piv = i;
    if (std::abs(A[piv * f + p]) < 1e-300) return false;
    if (piv != p) {
      for (int j = p; j < f; ++j) std::swap(A[p * f + j], A[piv * f + j]);
      std::swap(b[p], b[piv]);
    }
    for (int i = p + 1; i < f; ++i) {
      double fct = A[i * f + p] / A[p * f + p];
      for (int j = p; j < f; ++j) A[i * f + j] -= fct * A[p * f + j];
      b[i] -= fct * b[p];
    }
  }
  for (int i = f - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < f; ++j) s -= A[i * f + j] * b[j];
    if (std::abs(A[i * f + i]) < 1e-300) return false;
    b[i] = s / A[i * f + i];
  }
  std::fill(d.begin(), d.end(), 0.0);
  for (int r = 0; r < f; ++r) d[free[r]] = b[r];
  return true;
}

WeightedDual minimize_box(const DualProblem& P, const std::vector<double>* warm) {
  std::size_t m = P.c.size();
  if (m == 1) return minimize_scalar(P);

  WeightedDual out;
  std::vector<double> mu(m, 0.0);
  if (warm && warm->size() == m)
    for (std::size_t i = 0; i < m; ++i) mu[i] = std::clamp((*warm)[i], 0.0, P.gamma[i]);
  double fval = P.eval(mu);
  double scale = 1.0;
  for (double ci : P.c) scale = std::max(scale, std::abs(ci));
  const double tol = 1e-11 * scale;

  std::vector<double> g(m), H(m * m), d(m), cand(m);
  double res = 0.0;
  const int max_iter = 100000;
  int it = 0;
  for (; it < max_iter; ++it) {
    P.grad(mu, g);
    res = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      res = std::max(res, std::abs(mu[i] - std::clamp(mu[i] - g[i], 0.0, P.gamma[i])));
    if (res <= tol) break;

    std::vector<int> free;
    for (std::size_t i = 0; i < m; ++i) {
      bool at_lo = mu[i] <= 1e-14 && g[i] > 0.0;
      bool at_hi = mu[i] >= P.gamma[i] - 1e-14 && g[i] < 0.0;
      if (!at_lo && !at_hi) free.push_back(static_cast<int>(i));
    }
    if (free.empty()) break;

    P.hess(mu, H);
    double diag = 0.0;
    for (std::size_t i = 0; i < m; ++i) diag = std::max(diag, H[i * m + i]);
    bool have_dir = solve_newton(H, g, free, std::max(1e-12 * diag, 1e-300), d, m);
    double gd = have_dir ? dot(g, d) : 0.0;
    if (!have_dir || gd >= 0.0) {
      std::fill(d.begin(), d.end(), 0.0);
      double gn = 0.0;
      for (int i : free) gn = std::max(gn, std::abs(g[i]));
      double step = gn > 0.0 ? 1.0 / gn * scale * 0.1 : 1.0;
      for (int i : free) d[i] = -g[i] * step;
      gd = dot(g, d);
    }

    double t = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < m; ++i)
        cand[i] = std::clamp(mu[i] + t * d[i], 0.0, P.gamma[i]);
      double fc = P.eval(cand);
      double pred = 0.0;
      for (std::size_t i = 0; i < m; ++i) pred += g[i] * (cand[i] - mu[i]);
      if (fc <= fval + 1e-4 * pred || (pred <= 0.0 && fc < fval - 1e-16 * scale)) {
        mu = cand;
        fval = fc;
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) break;
  }
  out.mu = mu;
  out.value = fval;
  out.residual = res / scale;
  return out;
}

struct Recovered {
  std::vector<double> q;
  double objective;
  double kkt;
};

// Recover primal quantiles from dual prices, then water-fill residual
// capacity over types whose threshold ties a point-mass atom.
Recovered recover_primal(const InstanceSpec& spec, const std::vector<double>& w,
                         const std::vector<double>& capacity, const std::vector<double>& mu,
                         double dual_residual) {
  int n = spec.num_types();
  std::size_t m = capacity.size();
  Recovered out;
  out.q.assign(n, 0.0);
  std::vector<int> tied;
  for (int j = 0; j < n; ++j) {
    if (w[j] <= 0.0) continue;
    const auto& t = spec.types[j];
    double z = type_price(t, mu);
    if (t.reward.kind() == RewardKind::PointMass) {
      double v = t.reward.lower();
      double tie_tol = 1e-9 * std::max(1.0, v);
      if (z < v - tie_tol)
        out.q[j] = 1.0;
      else if (z > v + tie_tol)
        out.q[j] = 0.0;
      else
        tied.push_back(j);
    } else {
      out.q[j] = t.reward.tail_prob(z);
    }
  }
  std::vector<double> used(m, 0.0);
  for (int j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) used[i] += w[j] * spec.types[j].consumption[i] * out.q[j];

  std::sort(tied.begin(), tied.end(), [&](int a, int b) {
    return spec.types[a].reward.lower() > spec.types[b].reward.lower();
  });
  for (int j : tied) {
    const auto& t = spec.types[j];
    double cap = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t.consumption[i] <= 0.0) continue;
      cap = std::min(cap, (capacity[i] - used[i]) / (w[j] * t.consumption[i]));
    }
    out.q[j] = std::clamp(cap, 0.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) used[i] += w[j] * t.consumption[i] * out.q[j];
  }

  out.objective = 0.0;
  for (int j = 0; j < n; ++j)
    if (w[j] > 0.0) out.objective += w[j] * spec.types[j].reward.top_mean(out.q[j]);

  double kkt = dual_residual;
  for (std::size_t i = 0; i < m; ++i) {
    double rel = std::max(1.0, capacity[i]);
    kkt = std::max(kkt, (used[i] - capacity[i]) / rel);
    double slack = capacity[i] - used[i];
    if (slack > 0.0) kkt = std::max(kkt, mu[i] * slack / rel);
  }
  out.kkt = std::max(kkt, 0.0);
  return out;
}

FluidSolution solve_weighted(const InstanceSpec& spec, const std::vector<double>& weights,
                             const std::vector<double>& capacity,
                             const std::vector<double>* warm) {
  DualProblem P{&spec, capacity, weights, DualDomain::for_instance(spec).gamma};
  WeightedDual dual = minimize_box(P, warm);
  if (dual.residual > 1e-7)
    throw SolverError("fluid dual did not converge", dual.residual);
  Recovered rec = recover_primal(spec, weights, capacity, dual.mu, dual.residual);
  FluidSolution sol;
  sol.quantiles = std::move(rec.q);
  sol.dual = std::move(dual.mu);
  sol.objective = rec.objective;
  sol.kkt_residual = rec.kkt;
  return sol;
}

}  // namespace

DualDomain DualDomain::for_instance(const InstanceSpec& spec, double scale) {
  DualDomain dom;
  dom.gamma.assign(spec.resources, 0.0);
  for (int i = 0; i < spec.resources; ++i) {
    double g = 0.0;
    for (const auto& t : spec.types)
      if (t.consumption[i] > 0.0) g = std::max(g, t.reward.upper() / t.consumption[i]);
    dom.gamma[i] = scale * g;
  }
  return dom;
}

FluidSolution solve_fluid(const InstanceSpec& spec, const std::vector<double>& capacity,
                          std::int64_t periods_left, const std::vector<double>* warm) {
  if (periods_left < 1) throw std::invalid_argument("solve_fluid: periods_left must be >= 1");
  std::vector<double> w(spec.num_types());
  double s = static_cast<double>(periods_left);
  for (int j = 0; j < spec.num_types(); ++j) w[j] = spec.types[j].probability * s;
  return solve_weighted(spec, w, capacity, warm);
}

FluidSolution solve_semifluid(const InstanceSpec& spec, const std::vector<double>& counts,
                              const std::vector<double>& capacity,
                              const std::vector<double>* warm) {
  for (double d : counts)
    if (d < 0.0) throw std::invalid_argument("solve_semifluid: counts must be nonnegative");
  return solve_weighted(spec, counts, capacity, warm);
}

FluidSolution solve_semifluid(const InstanceSpec& spec, const std::vector<std::int64_t>& counts,
                              const std::vector<double>& capacity,
                              const std::vector<double>* warm) {
  std::vector<double> d(counts.begin(), counts.end());
  return solve_semifluid(spec, d, capacity, warm);
}

namespace {

// Exact single-resource sample dual: piecewise-linear objective solved by
// sorting the breakpoints r_t / a_t.
DualResult sample_dual_scalar(const InstanceSpec& spec, double capacity, double gamma,
                              const SamplePath& path, std::int64_t from, std::int64_t count) {
  std::vector<std::pair<double, double>> bp;  // (breakpoint, weight a)
  bp.reserve(count);
  double total_a = 0.0;
  for (std::int64_t t = from; t < from + count; ++t) {
    double a = spec.types[path.type_index[t - 1]].consumption[0];
    if (a <= 0.0) continue;
    bp.emplace_back(path.rewards[t - 1] / a, a);
    total_a += a;
  }
  std::sort(bp.begin(), bp.end());
  double mu = 0.0;
  double slope = capacity - total_a;  // subgradient below the smallest breakpoint
  if (slope < 0.0) {
    mu = bp.empty() ? 0.0 : bp.back().first;
    for (const auto& [b, a] : bp) {
      slope += a;
      if (slope >= 0.0) {
        mu = b;
        break;
      }
    }
  }
  mu = std::clamp(mu, 0.0, gamma);
  double inv = 1.0 / static_cast<double>(count);
  double value = capacity * inv * mu;
  for (std::int64_t t = from; t < from + count; ++t) {
    double a = spec.types[path.type_index[t - 1]].consumption[0];
    value += inv * std::max(path.rewards[t - 1] - a * mu, 0.0);
  }
  return {{mu}, value, 0.0};
}

}  // namespace

DualResult minimize_dual(const InstanceSpec& spec, const std::vector<double>& capacity,
                         std::int64_t periods_left, DualMode mode, const SamplePath* path,
                         std::int64_t from_period, const std::vector<double>* warm) {
  DualDomain dom = DualDomain::for_instance(spec);
  double denom = static_cast<double>(std::max<std::int64_t>(periods_left - 1, 1));
  if (mode == DualMode::Population) {
    DualProblem P{&spec, {}, {}, dom.gamma};
    P.c.resize(capacity.size());
    for (std::size_t i = 0; i < capacity.size(); ++i) P.c[i] = capacity[i] / denom;
    P.w.resize(spec.num_types());
    for (int j = 0; j < spec.num_types(); ++j) P.w[j] = spec.types[j].probability;
    WeightedDual r = minimize_box(P, warm);
    if (r.residual > 1e-7) throw SolverError("population dual did not converge", r.residual);
    return {std::move(r.mu), r.value, r.residual};
  }

  if (!path) throw std::invalid_argument("minimize_dual: sample mode requires a path");
  std::int64_t count = path->horizon() - from_period + 1;
  if (count < 1) throw std::invalid_argument("minimize_dual: empty suffix");
  if (spec.resources == 1)
    return sample_dual_scalar(spec, capacity[0], dom.gamma[0], *path, from_period, count);

  // Multi-resource sample dual: solve the packing LP exactly and read the
  // row prices off the optimal basis.
  std::vector<double> rewards(count);
  for (std::int64_t k = 0; k < count; ++k) rewards[k] = path->rewards[from_period - 1 + k];
  auto column = [&](std::int64_t k) -> const double* {
    return spec.types[path->type_index[from_period - 1 + k]].consumption.data();
  };
  std::vector<double> warm_mu;
  if (warm && warm->size() == capacity.size()) {
    warm_mu = *warm;
  } else {
    try {
      warm_mu = minimize_dual(spec, capacity, periods_left, DualMode::Population).mu;
    } catch (const SolverError&) {
      warm_mu.assign(capacity.size(), 0.0);
    }
  }
  LpSolution lp = solve_packing_lp(spec.resources, count, column, rewards, capacity, &warm_mu);
  if (!lp.ok) throw SolverError("sample dual simplex hit the iteration cap", 1.0);

  auto dual_value = [&](const std::vector<double>& mu) {
    double v = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) v += capacity[i] * mu[i];
    for (std::int64_t k = 0; k < count; ++k) {
      const double* a = column(k);
      double z = 0.0;
      for (std::size_t i = 0; i < mu.size(); ++i) z += a[i] * mu[i];
      v += std::max(rewards[k] - z, 0.0);
    }
    return v / static_cast<double>(count);
  };
  std::vector<double> mu = lp.dual;
  std::vector<double> clipped(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) clipped[i] = std::min(mu[i], dom.gamma[i]);
  if (dual_value(clipped) <= dual_value(mu) + 1e-12) mu = clipped;
  double value = dual_value(mu);
  double gap = std::abs(value * static_cast<double>(count) - lp.value) /
               std::max(1.0, std::abs(lp.value));
  if (gap > 1e-7) throw SolverError("sample dual has a residual duality gap", gap);
  return {std::move(mu), value, gap};
}

}  // namespace nrm
