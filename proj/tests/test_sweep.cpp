#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "matchsim/deviation.hpp"
#include "matchsim/prefgen.hpp"
#include "matchsim/rng.hpp"
#include "matchsim/sweep.hpp"
#include "support.hpp"

using namespace matchsim;

namespace {

double mean_stderr(const std::vector<AggregateRow>& groups) {
  double sum = 0.0;
  for (const auto& g : groups) sum += g.stderr_ratio;
  return sum / static_cast<double>(groups.size());
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("run_cell examples") {
  const auto trivial = run_cell(1, 1, 0.7, 3, 99);
  CHECK(trivial.deviators == 0);
  CHECK(trivial.ratio == 0.0);

  CHECK(run_cell(30, 5, 1.0, 2, 7) == run_cell(30, 5, 1.0, 2, 7));

  const auto row = run_cell(4, 3, 1.0, 0, 123);
  CHECK(row.seed == cell_seed(123, 4, 3, 1.0, 0));
  CHECK(row.deviators == brute_force_deviators(generate_market(4, 3, 1.0, row.seed)));
  CHECK(row.ratio == static_cast<double>(row.deviators) / 4.0);
}

TEST_CASE("config validation") {
  SweepConfig good{{5}, {2}, {1.0}, 1, 0, 1};
  CHECK_NOTHROW(validate(good));
  auto bad = good;
  bad.n_values.clear();
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.trials = 0;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.k_values = {0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.n_values = {0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.rho_values = {-1.0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = good;
  bad.rho_values = {1.0, 1.0};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("single-cell sweep yields a single row") {
  const auto rows = run_sweep(SweepConfig{{8}, {3}, {1.0}, 1, 5, 1});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == run_cell(8, 3, 1.0, 0, 5));
}

TEST_CASE("rows come back in canonical order with the exact grid cardinality") {
  SweepConfig config{{30, 5, 12}, {4, 2}, {3.0, 0.05}, 3, 11, 3};
  std::size_t events = 0, last_done = 0;
  const auto rows = run_sweep(config, [&](std::size_t done, std::size_t total) {
    ++events;
    CHECK(done == last_done + 1);
    CHECK(total == 36);
    last_done = done;
  });
  CHECK(rows.size() == 3 * 2 * 2 * 3);
  CHECK(events == rows.size());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto key = [](const SweepRow& r) { return std::tuple(r.n, r.k, r.rho, r.trial); };
    CHECK(key(rows[i - 1]) < key(rows[i]));
  }
  for (const auto& row : rows) {
    CHECK(row.ratio == static_cast<double>(row.deviators) / static_cast<double>(row.n));
    CHECK(row.ratio >= 0.0);
    CHECK(row.ratio <= 1.0);
  }
}

TEST_CASE("output does not depend on the worker count") {
  SweepConfig config{{5, 20, 50}, {3, 10}, {0.05, 3.0}, 4, 2024, 1};
  const auto serial = run_sweep(config);
  for (std::size_t workers : {2u, 8u, 0u}) {
    config.workers = workers;
    CHECK(run_sweep(config) == serial);
  }
}

TEST_CASE("aggregate examples") {
  SweepRow a{5, 10, 1.0, 0, 1, 0, 0.0};
  const auto one = aggregate(std::vector<SweepRow>{a});
  REQUIRE(one.size() == 1);
  CHECK(one[0].mean_ratio == 0.0);
  CHECK(one[0].stderr_ratio == 0.0);
  CHECK(one[0].trials == 1);

  SweepRow lo{5, 10, 1.0, 0, 1, 1, 0.2};
  SweepRow hi{5, 10, 1.0, 1, 2, 2, 0.4};
  const auto two = aggregate(std::vector<SweepRow>{lo, hi});
  REQUIRE(two.size() == 1);
  CHECK(two[0].mean_ratio == doctest::Approx(0.3));
  // sample sd = sqrt(0.02) and sd / sqrt(2) = 0.1
  CHECK(two[0].stderr_ratio == doctest::Approx(0.1));

  CHECK_THROWS_AS(aggregate(std::vector<SweepRow>{}), std::invalid_argument);
}

TEST_CASE("aggregates are recomputable from the rows") {
  const auto rows = run_sweep(SweepConfig{{10, 25}, {5}, {1.0, 3.0}, 6, 3, 1});
  const auto groups = aggregate(rows);
  CHECK(groups.size() == 4);
  for (const auto& g : groups) {
    std::vector<double> ratios;
    for (const auto& r : rows) {
      if (r.n == g.n && r.k == g.k && r.rho == g.rho) ratios.push_back(r.ratio);
    }
    CHECK(g.trials == ratios.size());
    CHECK(g.mean_ratio ==
          doctest::Approx(std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size()));
    CHECK(g.mean_ratio >= 0.0);
    CHECK(g.mean_ratio <= 1.0);
  }
}

TEST_CASE("standard error shrinks with more trials") {
  SweepConfig config{{20}, {10}, {1.0}, 10, 77, 1};
  const double ten = aggregate(run_sweep(config))[0].stderr_ratio;
  config.trials = 100;
  const double hundred = aggregate(run_sweep(config))[0].stderr_ratio;
  CHECK(hundred < ten);
}

TEST_CASE("denser runs over the same grid have smaller mean standard error") {
  // 4 k values x 3 rho values = 12 curves; 13 trials give 156 points, 176 give 2112.
  SweepConfig config{{20}, {10, 15, 20, 40}, {0.05, 1.0, 3.0}, 13, 314, 1};
  const auto sparse = run_sweep(config);
  REQUIRE(sparse.size() == 156);
  config.trials = 176;
  const auto dense = run_sweep(config);
  REQUIRE(dense.size() == 2112);
  CHECK(mean_stderr(aggregate(dense)) < mean_stderr(aggregate(sparse)));
}

TEST_CASE("ratio curves at rho = 0.05 fall with n") {
  SweepConfig config{default_n_ladder(), {10, 15, 20, 40}, {0.05}, 50, 8, 0};
  const auto groups = aggregate(run_sweep(config));
  for (std::size_t k : config.k_values) {
    std::vector<double> ns, means;
    for (const auto& g : groups) {
      if (g.k != k) continue;
      ns.push_back(static_cast<double>(g.n));
      means.push_back(g.mean_ratio);
    }
    INFO("k = " << k);
    CHECK(testing::spearman(ns, means) < 0.0);
  }
}

TEST_CASE("doubling n costs at most about ten times more per cell") {
  auto per_cell = [](std::size_t n) {
    const std::size_t trials = 20;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t t = 0; t < trials; ++t) (void)run_cell(n, 20, 1.0, t, 1);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
           static_cast<double>(trials);
  };
  const double small = per_cell(100);
  const double large = per_cell(200);
  MESSAGE("per-cell seconds: n=100 " << small << ", n=200 " << large << ", ratio "
                                     << large / small);
  CHECK(large / small <= 10.0);
}

}  // TEST_SUITE
