#include "nrm/run.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "nrm/fluid.hpp"
#include "nrm/harness.hpp"

namespace nrm {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct CsvRow {
  std::string experiment;
  std::string policy;
  std::string t_or_s;
  std::string mean;
  std::string stderr_;
  std::string reps;
  std::string extra;
};

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  out << "experiment,policy,T_or_s,mean,stderr,reps,extra\n";
  for (const auto& r : rows)
    out << r.experiment << ',' << r.policy << ',' << r.t_or_s << ',' << r.mean << ','
        << r.stderr_ << ',' << r.reps << ',' << r.extra << '\n';
}

void write_meta(const std::string& path, const RunConfig& cfg, double wall_seconds,
                bool partial, const std::string& error) {
  nlohmann::json meta;
  meta["config"] = nlohmann::json::parse(serialize_config(cfg));
  meta["seed"] = cfg.seed;
  meta["workers"] = cfg.workers;
  meta["replications"] = cfg.effective_replications();
  meta["version"] = "0.1.0";
  meta["wall_seconds"] = wall_seconds;
  meta["partial"] = partial;
  if (!error.empty()) meta["error"] = error;
  std::ofstream out(path, std::ios::binary);
  out << meta.dump(2) << '\n';
}

std::string join_doubles(const std::vector<double>& v, const char* sep = ";") {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << fmt(v[i]);
  }
  return os.str();
}

void run_solve(const RunConfig& cfg, std::vector<CsvRow>& rows) {
  InstanceSpec spec = cfg.instance;
  spec.horizon = cfg.horizon;
  spec.validate();
  FluidSolution sol = solve_fluid(spec, spec.initial_capacity(), spec.horizon);
  std::cout << "objective " << fmt(sol.objective) << "\n";
  std::cout << "q* " << join_doubles(sol.quantiles, " ") << "\n";
  std::cout << "mu* " << join_doubles(sol.dual, " ") << "\n";
  std::cout << "kkt_residual " << fmt(sol.kkt_residual) << "\n";
  CsvRow row;
  row.experiment = "solve";
  row.t_or_s = std::to_string(cfg.horizon);
  row.mean = fmt(sol.objective);
  row.extra = "q=" + join_doubles(sol.quantiles) + "|mu=" + join_doubles(sol.dual) +
              "|kkt=" + fmt(sol.kkt_residual);
  rows.push_back(std::move(row));
}

void regret_rows(const std::string& experiment, const RegretTable& table,
                 std::vector<CsvRow>& rows) {
  for (const auto& r : table.rows) {
    CsvRow row;
    row.experiment = experiment;
    row.policy = r.policy;
    row.t_or_s = std::to_string(r.horizon);
    row.mean = fmt(r.mean_regret);
    row.stderr_ = fmt(r.std_error);
    row.reps = std::to_string(r.replications);
    if (r.has_integer) row.extra = "regret_int=" + fmt(r.mean_regret_integer);
    rows.push_back(std::move(row));
  }
}

void run_simulate(const RunConfig& cfg, std::vector<CsvRow>& rows) {
  RegretTable table = estimate_regret(cfg.instance, cfg.policies, {cfg.horizon},
                                      cfg.effective_replications(), cfg.seed, cfg.workers);
  regret_rows("simulate", table, rows);
}

void run_sweep(const RunConfig& cfg, std::vector<CsvRow>& rows) {
  RegretTable table = estimate_regret(cfg.instance, cfg.policies, cfg.t_grid,
                                      cfg.effective_replications(), cfg.seed, cfg.workers);
  regret_rows("sweep", table, rows);
  for (const auto& p : cfg.policies) {
    std::string name = policy_kind_name(p.kind);
    CsvRow row;
    row.experiment = "sweep_fit";
    row.policy = name;
    row.t_or_s = "0";
    try {
      GrowthFit fit = fit_growth(table, name);
      row.mean = fmt(fit.exponent);
      row.extra = "coefficient=" + fmt(fit.coefficient) + "|r2=" + fmt(fit.r_squared) +
                  "|points=" + std::to_string(fit.points_used);
    } catch (const std::runtime_error& e) {
      row.extra = std::string("fit_error=") + e.what();
    }
    rows.push_back(std::move(row));
  }
}

void run_dualconv(const RunConfig& cfg, std::vector<CsvRow>& rows) {
  DualGapResult res = dual_convergence_experiment(cfg.instance, cfg.s_grid,
                                                  cfg.effective_replications(), cfg.seed,
                                                  cfg.workers);
  for (const auto& r : res.rows) {
    double avg = 0.0, avg_se = 0.0;
    for (std::size_t j = 0; j < r.mean_sq_gap.size(); ++j) {
      avg += r.mean_sq_gap[j];
      avg_se += r.std_error[j];
    }
    avg /= static_cast<double>(r.mean_sq_gap.size());
    avg_se /= static_cast<double>(r.mean_sq_gap.size());
    CsvRow row;
    row.experiment = "dualconv";
    row.t_or_s = std::to_string(r.scale);
    row.mean = fmt(avg);
    row.stderr_ = fmt(avg_se);
    row.reps = std::to_string(r.replications);
    row.extra = "per_type=" + join_doubles(r.mean_sq_gap);
    rows.push_back(std::move(row));
  }
  CsvRow slope;
  slope.experiment = "dualconv_fit";
  slope.t_or_s = "0";
  slope.mean = fmt(res.slope);
  rows.push_back(std::move(slope));
}

void run_myopic(const RunConfig& cfg, std::vector<CsvRow>& rows) {
  EstimatorConfig policy;
  if (!cfg.policies.empty()) policy = cfg.policies[0];
  MyopicResult res = myopic_decay_experiment(cfg.instance, cfg.s_grid,
                                             cfg.effective_replications(), cfg.seed, cfg.workers,
                                             policy);
  for (const auto& r : res.rows) {
    CsvRow row;
    row.experiment = "myopic";
    row.policy = policy_kind_name(policy.kind);
    row.t_or_s = std::to_string(r.scale);
    row.mean = fmt(r.mean_loss);
    row.stderr_ = fmt(r.std_error);
    row.reps = std::to_string(r.replications);
    rows.push_back(std::move(row));
  }
  CsvRow slope;
  slope.experiment = "myopic_fit";
  slope.policy = policy_kind_name(policy.kind);
  slope.t_or_s = "0";
  slope.mean = fmt(res.slope);
  rows.push_back(std::move(slope));
}

}  // namespace

int run(const RunConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  std::string csv_path = (fs::path(out_dir) / "results.csv").string();
  std::string meta_path = (fs::path(out_dir) / "meta.json").string();

  std::vector<CsvRow> rows;
  bool partial = false;
  std::string error;
  int code = 0;
  try {
    switch (cfg.kind) {
      case ExperimentKind::Solve: run_solve(cfg, rows); break;
      case ExperimentKind::Simulate: run_simulate(cfg, rows); break;
      case ExperimentKind::Sweep: run_sweep(cfg, rows); break;
      case ExperimentKind::DualConv: run_dualconv(cfg, rows); break;
      case ExperimentKind::Myopic: run_myopic(cfg, rows); break;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    partial = true;
    error = e.what();
    code = 1;
    std::cerr << "error: " << e.what() << "\n";
  }

  if (partial) {
    CsvRow marker;
    marker.experiment = "partial";
    marker.extra = "partial=true";
    rows.push_back(std::move(marker));
  }
  write_csv(csv_path, rows);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_meta(meta_path, cfg, wall, partial, error);
  return code;
}

}  // namespace nrm
