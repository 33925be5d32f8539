// End-to-end acceptance gate: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nrm/fluid.hpp"
#include "nrm/harness.hpp"
#include "nrm/offline.hpp"
#include "nrm/run.hpp"

using namespace nrm;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

void report(int id, const char* name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s criterion-%d %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", id, name,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

InstanceSpec random_instance(std::mt19937& gen, int max_resources, std::int64_t max_horizon) {
  std::uniform_int_distribution<int> Rm(1, max_resources);
  std::uniform_int_distribution<int> Rn(1, 3);
  std::uniform_int_distribution<std::int64_t> Rt(2, max_horizon);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  InstanceSpec spec;
  spec.resources = Rm(gen);
  spec.horizon = Rt(gen);
  int n = Rn(gen);
  std::vector<double> p(n);
  double psum = 0.0;
  for (int j = 0; j < n; ++j) psum += p[j] = 0.1 + U(gen);
  for (int j = 0; j < n; ++j) {
    QueryType t;
    t.probability = p[j] / psum;
    for (int i = 0; i < spec.resources; ++i)
      t.consumption.push_back(U(gen) < 0.3 ? 0.0 : 0.25 + U(gen));
    if (*std::max_element(t.consumption.begin(), t.consumption.end()) == 0.0)
      t.consumption[0] = 1.0;
    t.reward = RewardDistribution::uniform(0.0, 0.5 + U(gen));
    spec.types.push_back(std::move(t));
  }
  for (int i = 0; i < spec.resources; ++i) spec.capacity_ratio.push_back(0.2 + 0.6 * U(gen));
  spec.validate();
  return spec;
}

// 1. Known primal-dual pair of the degenerate triangle instance.
void criterion1() {
  Timer timer;
  bool ok = true;
  std::ostringstream detail;
  for (double eps : {0.05, 0.1, 0.2}) {
    auto spec = make_degenerate_triangle(eps, 1000);
    FluidSolution sol = solve_fluid(spec, spec.initial_capacity(), spec.horizon);
    double qe[3] = {0.5 * (1 + eps), eps, 0.5 * (1 + eps)};
    for (int j = 0; j < 3; ++j)
      if (std::abs(sol.quantiles[j] - qe[j]) > 1e-6) ok = false;
    double oracle = 0.0;
    for (int j = 0; j < 3; ++j) {
      const auto& d = spec.types[j].reward;
      oracle += spec.types[j].probability * 1000.0 *
                integrate([&](double p) { return d.quantile(p); }, 1.0 - sol.quantiles[j], 1.0,
                          1e-13);
    }
    if (std::abs(sol.objective - oracle) > 1e-8 * std::max(1.0, std::abs(oracle))) ok = false;
    if (sol.kkt_residual > 1e-8) ok = false;
    if (eps == 0.1) detail << "q=(" << sol.quantiles[0] << "," << sol.quantiles[1] << ","
                           << sol.quantiles[2] << ") kkt=" << sol.kkt_residual;
  }
  if (timer.seconds() > 1.0) ok = false;
  report(1, "fixture-solve", ok, detail.str(), timer.seconds());
}

// 2. LP relaxation vs exhaustive integer optimum on random instances.
void criterion2() {
  Timer timer;
  bool ok = true;
  std::ostringstream detail;
  std::mt19937 gen(2);
  std::uniform_int_distribution<std::int64_t> Rc(1, 6);
  int exact_checked = 0;
  for (int trial = 0; trial < 200 && ok; ++trial) {
    InstanceSpec spec = random_instance(gen, 3, 12);
    SamplePath path = sample_path(spec, 1000 + trial, 0);
    std::vector<double> cap = spec.initial_capacity();
    OfflineResult lp = offline_lp(spec, path, 1, cap);
    double integer = offline_integer(spec, path, cap);
    if (lp.lp_value < integer - 1e-9) ok = false;
    if (std::abs(lp.duality_gap) > 1e-8 * std::max(1.0, lp.lp_value)) ok = false;
    // unit-demand variant with integer capacity: exact equality
    auto unit = make_single_uniform(0.5, spec.horizon);
    SamplePath upath = sample_path(unit, 2000 + trial, 0);
    double C = static_cast<double>(Rc(gen));
    if (offline_lp(unit, upath, 1, {C}).lp_value != offline_integer(unit, upath, {C}))
      ok = false;
    else
      ++exact_checked;
  }
  detail << "200 instances, " << exact_checked << " exact unit-demand matches";
  bool in_time = timer.seconds() < 30.0;
  report(2, "offline-oracle-equivalence", ok && in_time, detail.str(), timer.seconds());
}

// 3. Marginal LP value bracketed by the two dual prices.
void criterion3() {
  Timer timer;
  int violations = 0;
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    InstanceSpec spec = random_instance(gen, 3, 12);
    SamplePath path = sample_path(spec, 3000 + trial, 0);
    std::vector<double> cap = spec.initial_capacity();
    const auto& a = spec.types[static_cast<std::size_t>(U(gen) * spec.num_types())].consumption;
    for (int i = 0; i < spec.resources; ++i) cap[i] = std::max(cap[i], a[i]);
    SandwichResult s = dual_sandwich_check(spec, path, 1, cap, a);
    if (s.lower > s.marginal + 1e-7 || s.marginal > s.upper + 1e-7) ++violations;
  }
  std::ostringstream detail;
  detail << violations << " violations / 100";
  report(3, "dual-sandwich", violations == 0 && timer.seconds() < 30.0, detail.str(),
         timer.seconds());
}

// 4. Tangent-plus-curvature bound on the partial quantile integral.
void criterion4() {
  Timer timer;
  int violations = 0;
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 10000; ++trial) {
    RewardDistribution d = [&] {
      switch (trial % 3) {
        case 0: return RewardDistribution::uniform(0.0, 0.5 + U(gen));
        case 1: return RewardDistribution::truncated_linear(0.0, 1.0, 0.5, 1.5);
        default: {
          double b = 1.2 + 0.6 * U(gen);  // alpha = 2 - beta in (0.2, 0.8)
          return RewardDistribution::truncated_linear(0.0, 1.0, 2.0 - b, b);
        }
      }
    }();
    double q1 = U(gen), q2 = U(gen);
    if (q1 > q2) std::swap(q1, q2);
    double alpha = d.density_floor();
    double lhs = integrate([&](double p) { return d.quantile(p); }, q1, q2, 1e-12);
    double rhs = d.quantile(q1) * (q2 - q1) + (q2 - q1) * (q2 - q1) / alpha;
    if (lhs > rhs + 1e-8) ++violations;
  }
  std::ostringstream detail;
  detail << violations << " violations / 10000";
  report(4, "quantile-integral-bound", violations == 0 && timer.seconds() < 10.0, detail.str(),
         timer.seconds());
}

// 5. Fitted regret growth exponents across the T grid.
void criterion5() {
  Timer timer;
  bool ok = true;
  std::ostringstream detail;
  std::vector<std::int64_t> grid = {1000, 2000, 4000, 8000, 16000};
  std::vector<EstimatorConfig> pols = {{PolicyKind::Log2Fluid, 1.0},
                                       {PolicyKind::LogDual},
                                       {PolicyKind::StaticBidprice}};
  int idx = 0;
  for (const InstanceSpec& base :
       {make_single_uniform(0.5, 1000), make_degenerate_triangle(0.1, 1000)}) {
    RegretTable table = estimate_regret(base, pols, grid, 1000, 50 + idx, 0);
    double b2 = fit_growth(table, "log2_fluid").exponent;
    double b3 = fit_growth(table, "log_dual").exponent;
    double bs = fit_growth(table, "static_bidprice").exponent;
    detail << (idx ? " triangle" : "uniform") << ": b2=" << b2 << " b3=" << b3 << " bs=" << bs;
    if (b2 > 0.25 || b3 > 0.25) ok = false;
    if (bs < 0.4 || bs > 0.6) ok = false;
    ++idx;
  }
  report(5, "regret-growth", ok, detail.str(), timer.seconds());
}

// 6. Mean squared dual gap decays like 1/s.
void criterion6() {
  Timer timer;
  auto spec = make_single_uniform(0.5, 10);
  DualGapResult res =
      dual_convergence_experiment(spec, {250, 500, 1000, 2000, 4000, 8000}, 500, 6, 0);
  std::ostringstream detail;
  detail << "slope=" << res.slope;
  bool ok = res.slope >= -1.3 && res.slope <= -0.7;
  report(6, "dual-convergence", ok && timer.seconds() < 300.0, detail.str(), timer.seconds());
}

// 7. One-period loss decays like log s / s.
void criterion7() {
  Timer timer;
  auto spec = make_single_uniform(0.5, 10);
  MyopicResult res =
      myopic_decay_experiment(spec, {250, 500, 1000, 2000, 4000, 8000}, 16, 7, 0);
  bool ok = res.slope <= -0.7;
  for (const auto& row : res.rows)
    if (row.mean_loss < -3.0 * row.std_error) ok = false;
  std::ostringstream detail;
  detail << "slope=" << res.slope;
  report(7, "myopic-decay", ok && timer.seconds() < 600.0, detail.str(), timer.seconds());
}

// 8. Byte-identical results at any worker count.
void criterion8() {
  Timer timer;
  namespace fs = std::filesystem;
  RunConfig cfg = parse_config(R"({
    "instance": {
      "resources": 1,
      "capacity_ratios": [0.5],
      "types": [{"a": [1.0], "p": 1.0, "reward": {"kind": "uniform", "l": 0.0, "u": 1.0}}]
    },
    "experiment": {
      "kind": "sweep",
      "policies": [{"kind": "log2_fluid"}, {"kind": "greedy"}],
      "T_grid": [200, 400],
      "replications": 40,
      "seed": 8
    }
  })");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::vector<std::string> outputs;
  for (int workers : {1, 4, 1}) {
    cfg.workers = workers;
    fs::path dir = fs::temp_directory_path() / ("nrm_acc8_" + std::to_string(outputs.size()));
    fs::remove_all(dir);
    run(cfg, dir.string());
    outputs.push_back(slurp(dir / "results.csv"));
    fs::remove_all(dir);
  }
  bool ok = outputs[0] == outputs[1] && outputs[0] == outputs[2] && !outputs[0].empty();
  report(8, "determinism", ok, ok ? "3 runs identical" : "outputs differ", timer.seconds());
}

// 9. Quantile map is Lipschitz in the realized counts.
void criterion9() {
  Timer timer;
  auto spec = make_single_uniform(0.5, 1000);
  std::vector<double> cap = spec.initial_capacity();
  FluidSolution base = solve_fluid(spec, cap, spec.horizon);
  std::mt19937 gen(9);
  std::uniform_real_distribution<double> U(-0.1, 0.1);
  std::vector<double> dq, dp;
  for (int k = 0; k < 1000; ++k) {
    double delta = U(gen);
    if (std::abs(delta) < 1e-6) continue;
    FluidSolution pert = solve_semifluid(spec, std::vector<double>{(1.0 + delta) * 1000.0}, cap);
    dq.push_back(std::abs(pert.quantiles[0] - base.quantiles[0]));
    dp.push_back(std::abs(delta));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < dq.size(); ++i) {
    num += dq[i] * dp[i];
    den += dp[i] * dp[i];
  }
  double kappa = num / den;  // least-squares Lipschitz estimate through the origin
  int outliers = 0;
  for (std::size_t i = 0; i < dq.size(); ++i)
    if (dq[i] > 2.0 * kappa * dp[i] + 1e-12) ++outliers;
  std::ostringstream detail;
  detail << "kappa=" << kappa << " outliers=" << outliers;
  report(9, "perturbation-stability", outliers == 0 && kappa > 0.0 && timer.seconds() < 30.0,
         detail.str(), timer.seconds());
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion9();
  criterion6();
  criterion7();
  criterion8();
  criterion5();
  if (g_failures) std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures ? 1 : 0;
}
