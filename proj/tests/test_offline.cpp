#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nrm/offline.hpp"

using namespace nrm;

namespace {

SamplePath handmade_path(const std::vector<double>& rewards, const std::vector<int>& types,
                         int num_types) {
  SamplePath path;
  path.rewards = rewards;
  path.type_index = types;
  std::int64_t T = static_cast<std::int64_t>(rewards.size());
  path.suffix.assign(static_cast<std::size_t>(num_types) * (T + 2), 0);
  for (std::int64_t t = T; t >= 1; --t)
    for (int j = 0; j < num_types; ++j)
      path.suffix[static_cast<std::size_t>(j) * (T + 2) + t] =
          path.suffix[static_cast<std::size_t>(j) * (T + 2) + t + 1] +
          (types[t - 1] == j ? 1 : 0);
  return path;
}

// Random small instance generator shared by the property tests.
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

}  // namespace

TEST_CASE("three-query knapsack examples") {
  auto spec = make_single_uniform(0.5, 3);
  SamplePath path = handmade_path({0.9, 0.2, 0.7}, {0, 0, 0}, 1);

  OfflineResult top2 = offline_lp(spec, path, 1, {2.0});
  CHECK(top2.lp_value == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(top2.x == std::vector<double>{1.0, 0.0, 1.0});
  CHECK(top2.dual[0] >= 0.2 - 1e-12);
  CHECK(top2.dual[0] <= 0.7 + 1e-12);
  CHECK(std::abs(top2.duality_gap) <= 1e-8);

  OfflineResult frac = offline_lp(spec, path, 1, {1.5});
  CHECK(frac.lp_value == doctest::Approx(1.25).epsilon(1e-12));
  CHECK(frac.x[0] == doctest::Approx(1.0));
  CHECK(frac.x[1] == doctest::Approx(0.0));
  CHECK(frac.x[2] == doctest::Approx(0.5));

  CHECK(offline_integer(spec, path, {2.0}) == doctest::Approx(1.6).epsilon(1e-12));
  CHECK(offline_integer(spec, path, {2.5}) == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("lp dominates the exhaustive integer optimum") {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 60; ++trial) {
    InstanceSpec spec = random_instance(gen, 3, 10);
    SamplePath path = sample_path(spec, 1234, static_cast<std::uint64_t>(trial));
    std::vector<double> cap = spec.initial_capacity();
    OfflineResult lp = offline_lp(spec, path, 1, cap);
    double integer = offline_integer(spec, path, cap);
    CHECK(lp.lp_value >= integer - 1e-9);
    CHECK(std::abs(lp.duality_gap) <= 1e-8 * std::max(1.0, lp.lp_value));
    // primal feasibility
    std::vector<double> load(spec.resources, 0.0);
    for (std::int64_t t = 0; t < path.horizon(); ++t) {
      CHECK(lp.x[t] >= -1e-12);
      CHECK(lp.x[t] <= 1.0 + 1e-12);
      for (int i = 0; i < spec.resources; ++i)
        load[i] += spec.types[path.type_index[t]].consumption[i] * lp.x[t];
    }
    for (int i = 0; i < spec.resources; ++i) CHECK(load[i] <= cap[i] + 1e-9);
  }
}

TEST_CASE("unit-demand integer capacity closes the relaxation gap exactly") {
  std::mt19937 gen(23);
  std::uniform_int_distribution<std::int64_t> Rt(3, 40);
  std::uniform_int_distribution<std::int64_t> Rc(1, 20);
  for (int trial = 0; trial < 50; ++trial) {
    std::int64_t T = Rt(gen);
    auto spec = make_single_uniform(0.5, T);
    SamplePath path = sample_path(spec, 55, static_cast<std::uint64_t>(trial));
    double C = static_cast<double>(Rc(gen));
    OfflineResult lp = offline_lp(spec, path, 1, {C});
    double integer = offline_integer(spec, path, {C});
    CHECK(lp.lp_value == integer);  // bit-exact: same summation order
    REQUIRE(lp.integer_value.has_value());
    CHECK(*lp.integer_value == integer);
  }
}

TEST_CASE("lp value is monotone in capacity") {
  std::mt19937 gen(29);
  for (int trial = 0; trial < 30; ++trial) {
    InstanceSpec spec = random_instance(gen, 3, 12);
    SamplePath path = sample_path(spec, 77, static_cast<std::uint64_t>(trial));
    std::vector<double> cap = spec.initial_capacity();
    double base = offline_lp(spec, path, 1, cap).lp_value;
    std::vector<double> more(cap);
    for (double& c : more) c *= 1.5;
    double bigger = offline_lp(spec, path, 1, more).lp_value;
    CHECK(bigger >= base - 1e-9);
  }
}

TEST_CASE("marginal value is sandwiched by the two dual prices") {
  auto spec = make_single_uniform(0.5, 3);
  SamplePath path = handmade_path({0.9, 0.2, 0.7}, {0, 0, 0}, 1);
  SandwichResult s = dual_sandwich_check(spec, path, 1, {2.0}, {1.0});
  CHECK(s.marginal == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(s.lower <= s.marginal + 1e-7);
  CHECK(s.marginal <= s.upper + 1e-7);
  CHECK(s.upper >= 0.7 - 1e-12);
  CHECK(s.upper <= 0.9 + 1e-12);

  // capacity so large both programs accept everything
  SandwichResult slack = dual_sandwich_check(spec, path, 1, {10.0}, {1.0});
  CHECK(slack.lower == doctest::Approx(0.0));
  CHECK(slack.marginal == doctest::Approx(0.0));
  CHECK(slack.upper == doctest::Approx(0.0));
}

TEST_CASE("sandwich holds on random instances") {
  std::mt19937 gen(41);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    InstanceSpec spec = random_instance(gen, 3, 12);
    SamplePath path = sample_path(spec, 99, static_cast<std::uint64_t>(trial));
    std::vector<double> cap = spec.initial_capacity();
    const auto& a = spec.types[static_cast<std::size_t>(U(gen) * spec.num_types())].consumption;
    std::vector<double> padded(cap);
    for (int i = 0; i < spec.resources; ++i) padded[i] = std::max(padded[i], a[i]);
    SandwichResult s = dual_sandwich_check(spec, path, 1, padded, a);
    if (s.lower > s.marginal + 1e-7 || s.marginal > s.upper + 1e-7) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("unsupported integer instances are rejected") {
  std::mt19937 gen(43);
  InstanceSpec spec = random_instance(gen, 2, 10);
  spec.horizon = 25;
  while (spec.single_resource_unit_demand()) spec = random_instance(gen, 2, 10), spec.horizon = 25;
  SamplePath path = sample_path(spec, 3, 0);
  CHECK_THROWS_AS(offline_integer(spec, path, spec.initial_capacity()), UnsupportedInstance);
}

TEST_CASE("degenerate inputs") {
  auto spec = make_single_uniform(0.5, 3);
  SamplePath path = handmade_path({0.9, 0.2, 0.7}, {0, 0, 0}, 1);
  OfflineResult empty = offline_lp(spec, path, 4, {2.0});  // empty suffix
  CHECK(empty.lp_value == 0.0);
  OfflineResult zero_cap = offline_lp(spec, path, 1, {0.0});
  CHECK(zero_cap.lp_value == 0.0);
  CHECK_THROWS_AS(offline_lp(spec, path, 1, {-1.0}), std::invalid_argument);
}
