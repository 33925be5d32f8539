#include "nrm/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace nrm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(path + "." + key, "unknown key");
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  if (!obj[key].is_number()) fail(path + "." + key, "expected a number");
  return obj[key].get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& path, const std::string& key) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  if (!obj[key].is_number_integer()) fail(path + "." + key, "expected an integer");
  return obj[key].get<std::int64_t>();
}

RewardDistribution parse_reward(const json& obj, const std::string& path) {
  require_keys(obj, path, {"kind", "l", "u", "alpha", "beta", "value"});
  if (!obj.contains("kind") || !obj["kind"].is_string())
    fail(path + ".kind", "missing or non-string reward kind");
  std::string kind = obj["kind"].get<std::string>();
  try {
    if (kind == "uniform")
      return RewardDistribution::uniform(get_number(obj, path, "l"), get_number(obj, path, "u"));
    if (kind == "truncated_linear")
      return RewardDistribution::truncated_linear(
          get_number(obj, path, "l"), get_number(obj, path, "u"), get_number(obj, path, "alpha"),
          get_number(obj, path, "beta"));
    if (kind == "point_mass")
      return RewardDistribution::point_mass(get_number(obj, path, "value"));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown reward kind '" + kind + "'");
}

EstimatorConfig parse_policy(const json& obj, const std::string& path) {
  require_keys(obj, path, {"kind", "kappa1", "resolve_every"});
  if (!obj.contains("kind") || !obj["kind"].is_string())
    fail(path + ".kind", "missing or non-string policy kind");
  EstimatorConfig cfg;
  try {
    cfg.kind = policy_kind_from_name(obj["kind"].get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(path + ".kind", e.what());
  }
  if (obj.contains("kappa1")) {
    cfg.kappa1 = get_number(obj, path, "kappa1");
    if (cfg.kappa1 <= 0.0) fail(path + ".kappa1", "must be positive");
  }
  if (obj.contains("resolve_every")) {
    cfg.resolve_every = get_integer(obj, path, "resolve_every");
    if (cfg.resolve_every < 1) fail(path + ".resolve_every", "must be >= 1");
  }
  return cfg;
}

std::vector<std::int64_t> parse_grid(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) fail(path, "expected a non-empty array of integers");
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& v = arr[i];
    if (!v.is_number_integer()) fail(path + "[" + std::to_string(i) + "]", "expected an integer");
    out.push_back(v.get<std::int64_t>());
  }
  return out;
}

InstanceSpec parse_instance(const json& obj, const std::string& path) {
  require_keys(obj, path, {"resources", "capacity_ratios", "types"});
  InstanceSpec spec;
  spec.resources = static_cast<int>(get_integer(obj, path, "resources"));
  if (spec.resources < 1) fail(path + ".resources", "must be >= 1");
  if (!obj.contains("capacity_ratios") || !obj["capacity_ratios"].is_array())
    fail(path + ".capacity_ratios", "expected an array");
  for (const auto& v : obj["capacity_ratios"]) {
    if (!v.is_number()) fail(path + ".capacity_ratios", "expected numbers");
    spec.capacity_ratio.push_back(v.get<double>());
  }
  if (static_cast<int>(spec.capacity_ratio.size()) != spec.resources)
    fail(path + ".capacity_ratios", "length must equal resources");
  if (!obj.contains("types") || !obj["types"].is_array() || obj["types"].empty())
    fail(path + ".types", "expected a non-empty array");
  double psum = 0.0;
  for (std::size_t j = 0; j < obj["types"].size(); ++j) {
    std::string tpath = path + ".types[" + std::to_string(j) + "]";
    const auto& t = obj["types"][j];
    require_keys(t, tpath, {"a", "p", "reward"});
    QueryType qt;
    if (!t.contains("a") || !t["a"].is_array()) fail(tpath + ".a", "expected an array");
    for (const auto& v : t["a"]) {
      if (!v.is_number()) fail(tpath + ".a", "expected numbers");
      qt.consumption.push_back(v.get<double>());
    }
    if (static_cast<int>(qt.consumption.size()) != spec.resources)
      fail(tpath + ".a", "length must equal resources");
    qt.probability = get_number(t, tpath, "p");
    if (qt.probability < 0.0) fail(tpath + ".p", "must be nonnegative");
    psum += qt.probability;
    if (!t.contains("reward")) fail(tpath + ".reward", "missing required field");
    qt.reward = parse_reward(t["reward"], tpath + ".reward");
    spec.types.push_back(std::move(qt));
  }
  if (std::abs(psum - 1.0) > 1e-9)
    fail(path + ".types", "type probabilities sum to " + std::to_string(psum) + ", expected 1");
  return spec;
}

json reward_to_json(const RewardDistribution& r) {
  json out;
  switch (r.kind()) {
    case RewardKind::Uniform:
      out["kind"] = "uniform";
      out["l"] = r.lower();
      out["u"] = r.upper();
      break;
    case RewardKind::TruncatedLinear:
      out["kind"] = "truncated_linear";
      out["l"] = r.lower();
      out["u"] = r.upper();
      out["alpha"] = r.density_floor();
      out["beta"] = r.density_ceiling();
      break;
    case RewardKind::PointMass:
      out["kind"] = "point_mass";
      out["value"] = r.lower();
      break;
  }
  return out;
}

}  // namespace

ExperimentKind experiment_kind_from_name(const std::string& name) {
  if (name == "simulate") return ExperimentKind::Simulate;
  if (name == "sweep") return ExperimentKind::Sweep;
  if (name == "dualconv") return ExperimentKind::DualConv;
  if (name == "myopic") return ExperimentKind::Myopic;
  if (name == "solve") return ExperimentKind::Solve;
  throw ConfigError("experiment.kind: unknown kind '" + name + "'");
}

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::DualConv: return "dualconv";
    case ExperimentKind::Myopic: return "myopic";
    case ExperimentKind::Solve: return "solve";
  }
  return "unknown";
}

std::int64_t RunConfig::effective_replications() const {
  if (replications > 0) return replications;
  return kind == ExperimentKind::DualConv ? 500 : 1000;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("document: ") + e.what());
  }
  require_keys(doc, "$", {"instance", "experiment"});
  if (!doc.contains("instance")) fail("$.instance", "missing required field");
  if (!doc.contains("experiment")) fail("$.experiment", "missing required field");

  RunConfig cfg;
  cfg.instance = parse_instance(doc["instance"], "instance");

  const json& exp = doc["experiment"];
  require_keys(exp, "experiment",
               {"kind", "policies", "T_grid", "s_grid", "horizon", "replications", "seed",
                "workers"});
  if (!exp.contains("kind") || !exp["kind"].is_string())
    fail("experiment.kind", "missing or non-string experiment kind");
  cfg.kind = experiment_kind_from_name(exp["kind"].get<std::string>());

  if (exp.contains("policies")) {
    if (!exp["policies"].is_array()) fail("experiment.policies", "expected an array");
    for (std::size_t i = 0; i < exp["policies"].size(); ++i)
      cfg.policies.push_back(
          parse_policy(exp["policies"][i], "experiment.policies[" + std::to_string(i) + "]"));
  }
  if (exp.contains("T_grid")) cfg.t_grid = parse_grid(exp["T_grid"], "experiment.T_grid");
  if (exp.contains("s_grid")) cfg.s_grid = parse_grid(exp["s_grid"], "experiment.s_grid");
  if (exp.contains("horizon")) {
    cfg.horizon = get_integer(exp, "experiment", "horizon");
    if (cfg.horizon < 1) fail("experiment.horizon", "must be >= 1");
  }
  if (exp.contains("replications")) {
    cfg.replications = get_integer(exp, "experiment", "replications");
    if (cfg.replications < 2) fail("experiment.replications", "must be >= 2");
  }
  if (exp.contains("seed")) {
    std::int64_t s = get_integer(exp, "experiment", "seed");
    if (s < 0) fail("experiment.seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (exp.contains("workers")) {
    std::int64_t w = get_integer(exp, "experiment", "workers");
    if (w < 0) fail("experiment.workers", "must be nonnegative");
    cfg.workers = static_cast<int>(w);
  }

  // kind-specific requirements
  switch (cfg.kind) {
    case ExperimentKind::Simulate:
      if (cfg.horizon < 1) fail("experiment.horizon", "required for kind 'simulate'");
      if (cfg.policies.empty()) fail("experiment.policies", "required for kind 'simulate'");
      break;
    case ExperimentKind::Sweep:
      if (cfg.t_grid.empty()) fail("experiment.T_grid", "required for kind 'sweep'");
      if (cfg.policies.empty()) fail("experiment.policies", "required for kind 'sweep'");
      for (std::int64_t t : cfg.t_grid)
        if (t < 1) fail("experiment.T_grid", "entries must be >= 1");
      break;
    case ExperimentKind::DualConv:
    case ExperimentKind::Myopic:
      if (cfg.s_grid.empty())
        fail("experiment.s_grid",
             std::string("required for kind '") + experiment_kind_name(cfg.kind) + "'");
      for (std::int64_t s : cfg.s_grid)
        if (s < 2) fail("experiment.s_grid", "entries must be >= 2");
      if (cfg.kind == ExperimentKind::Myopic && cfg.policies.size() > 1)
        fail("experiment.policies", "at most one policy for kind 'myopic'");
      break;
    case ExperimentKind::Solve:
      if (cfg.horizon < 1) fail("experiment.horizon", "required for kind 'solve'");
      break;
  }

  // instance-level validation mirrors InstanceSpec::validate() but maps
  // onto config error reporting
  InstanceSpec probe = cfg.instance;
  probe.horizon = std::max<std::int64_t>(cfg.horizon, 1);
  try {
    probe.validate();
  } catch (const std::invalid_argument& e) {
    fail("instance", e.what());
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  json inst;
  inst["resources"] = cfg.instance.resources;
  inst["capacity_ratios"] = cfg.instance.capacity_ratio;
  json types = json::array();
  for (const auto& t : cfg.instance.types) {
    json jt;
    jt["a"] = t.consumption;
    jt["p"] = t.probability;
    jt["reward"] = reward_to_json(t.reward);
    types.push_back(std::move(jt));
  }
  inst["types"] = std::move(types);
  doc["instance"] = std::move(inst);

  json exp;
  exp["kind"] = experiment_kind_name(cfg.kind);
  if (!cfg.policies.empty()) {
    json pol = json::array();
    for (const auto& p : cfg.policies) {
      json jp;
      jp["kind"] = policy_kind_name(p.kind);
      jp["kappa1"] = p.kappa1;
      jp["resolve_every"] = p.resolve_every;
      pol.push_back(std::move(jp));
    }
    exp["policies"] = std::move(pol);
  }
  if (!cfg.t_grid.empty()) exp["T_grid"] = cfg.t_grid;
  if (!cfg.s_grid.empty()) exp["s_grid"] = cfg.s_grid;
  if (cfg.horizon > 0) exp["horizon"] = cfg.horizon;
  if (cfg.replications > 0) exp["replications"] = cfg.replications;
  exp["seed"] = cfg.seed;
  exp["workers"] = cfg.workers;
  doc["experiment"] = std::move(exp);
  return doc.dump(2);
}

}  // namespace nrm
