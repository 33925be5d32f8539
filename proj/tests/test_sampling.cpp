#include <doctest.h>

#include <cmath>

#include "nrm/sample_path.hpp"

using namespace nrm;

TEST_CASE("paths are deterministic in (seed, replication)") {
  auto spec = make_degenerate_triangle(0.1, 500);
  SamplePath a = sample_path(spec, 42, 3);
  SamplePath b = sample_path(spec, 42, 3);
  CHECK(a.rewards == b.rewards);
  CHECK(a.type_index == b.type_index);
  SamplePath c = sample_path(spec, 42, 4);
  CHECK(a.rewards != c.rewards);
  SamplePath d = sample_path(spec, 43, 3);
  CHECK(a.rewards != d.rewards);
}

TEST_CASE("suffix counts tally the path") {
  auto spec = make_degenerate_triangle(0.2, 200);
  SamplePath path = sample_path(spec, 7, 0);
  std::int64_t T = path.horizon();
  for (std::int64_t t : {std::int64_t(1), std::int64_t(57), T, T + 1}) {
    std::vector<std::int64_t> manual(spec.num_types(), 0);
    for (std::int64_t u = t; u <= T; ++u) manual[path.type_index[u - 1]] += 1;
    CHECK(path.suffix_counts(t) == manual);
  }
  std::int64_t total = 0;
  for (int j = 0; j < spec.num_types(); ++j) total += path.suffix_count(j, 1);
  CHECK(total == T);
}

TEST_CASE("type frequencies match the probabilities") {
  auto spec = make_degenerate_triangle(0.1, 1);
  std::int64_t N = 200000;
  std::vector<std::int64_t> counts(3, 0);
  CounterRng rng(11, 0);
  for (std::int64_t t = 1; t <= N; ++t) {
    int j;
    double r;
    draw_query(spec, rng, t, j, r);
    counts[j] += 1;
  }
  for (int j = 0; j < 3; ++j) {
    double freq = static_cast<double>(counts[j]) / static_cast<double>(N);
    double p = spec.types[j].probability;
    double se = std::sqrt(p * (1 - p) / static_cast<double>(N));
    CHECK(std::abs(freq - p) < 5.0 * se);
  }
}

TEST_CASE("rewards follow the quantile transform") {
  // uniform(0,1) rewards: empirical mean 1/2, second moment 1/3
  auto spec = make_single_uniform(0.5, 100000);
  SamplePath path = sample_path(spec, 5, 1);
  double m1 = 0.0, m2 = 0.0;
  for (double r : path.rewards) {
    m1 += r;
    m2 += r * r;
    CHECK(r >= 0.0);
    CHECK(r < 1.0);
  }
  m1 /= static_cast<double>(path.horizon());
  m2 /= static_cast<double>(path.horizon());
  CHECK(m1 == doctest::Approx(0.5).epsilon(0.01));
  CHECK(m2 == doctest::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("replication streams are order independent") {
  // drawing replication 9 never depends on having drawn 0..8
  auto spec = make_single_uniform(0.5, 50);
  SamplePath direct = sample_path(spec, 99, 9);
  for (std::uint64_t rep = 0; rep < 9; ++rep) (void)sample_path(spec, 99, rep);
  SamplePath again = sample_path(spec, 99, 9);
  CHECK(direct.rewards == again.rewards);
}
