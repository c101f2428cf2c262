#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace matchsim {

struct SweepConfig {
  std::vector<std::size_t> n_values;
  std::vector<std::size_t> k_values;
  std::vector<double> rho_values;
  std::size_t trials = 50;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;  // 0 = one per hardware thread
};

/// Throws std::invalid_argument on empty or duplicated grids, trials = 0, n = 0,
/// k = 0, or a negative/non-finite rho.
void validate(const SweepConfig& config);

/// Default market-size ladder, dense over the 10..100 range.
std::vector<std::size_t> default_n_ladder();

struct SweepRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double rho = 0.0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t deviators = 0;
  double ratio = 0.0;

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct AggregateRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double rho = 0.0;
  std::size_t trials = 0;
  double mean_ratio = 0.0;
  double stderr_ratio = 0.0;  // sample standard deviation / sqrt(trials); 0 for one trial
};

/// One market: seed derived from (master_seed, n, k, rho, trial), then deviator count.
SweepRow run_cell(std::size_t n, std::size_t k, double rho, std::size_t trial,
                  std::uint64_t master_seed);

/// Called with (cells finished, total cells); may be invoked from worker threads
/// but never concurrently.
using ProgressSink = std::function<void(std::size_t done, std::size_t total)>;

/// Every (n, k, rho, trial) cell, returned in ascending (n, k, rho, trial) order
/// whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& config, const ProgressSink& progress = {});

/// Groups rows by (n, k, rho) in ascending order. Rejects empty input.
std::vector<AggregateRow> aggregate(std::span<const SweepRow> rows);

}  // namespace matchsim
