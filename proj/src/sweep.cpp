#include "matchsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "matchsim/deviation.hpp"
#include "matchsim/prefgen.hpp"
#include "matchsim/rng.hpp"

namespace matchsim {

namespace {

template <typename T>
bool has_duplicates(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) != values.end();
}

struct Cell {
  std::size_t n, k;
  double rho;
  std::size_t trial;
};

}  // namespace

void validate(const SweepConfig& config) {
  if (config.n_values.empty() || config.k_values.empty() || config.rho_values.empty()) {
    throw std::invalid_argument("sweep: n, k and rho grids must be non-empty");
  }
  if (config.trials == 0) throw std::invalid_argument("sweep: trials must be at least 1");
  for (auto n : config.n_values) {
    if (n == 0) throw std::invalid_argument("sweep: every n must be at least 1");
  }
  for (auto k : config.k_values) {
    if (k == 0) throw std::invalid_argument("sweep: every k must be at least 1");
  }
  for (double rho : config.rho_values) {
    if (!std::isfinite(rho) || rho < 0.0) {
      throw std::invalid_argument("sweep: rho must be finite and non-negative");
    }
  }
  if (has_duplicates(config.n_values) || has_duplicates(config.k_values) ||
      has_duplicates(config.rho_values)) {
    throw std::invalid_argument("sweep: grid values must be distinct");
  }
}

std::vector<std::size_t> default_n_ladder() {
  return {5, 10, 20, 35, 50, 75, 100, 150, 200, 300, 400};
}

SweepRow run_cell(std::size_t n, std::size_t k, double rho, std::size_t trial,
                  std::uint64_t master_seed) {
  SweepRow row;
  row.n = n;
  row.k = k;
  row.rho = rho;
  row.trial = trial;
  row.seed = cell_seed(master_seed, n, k, rho, trial);
  const Market market = generate_market(n, k, rho, row.seed);
  row.deviators = count_deviators(market).deviator_count;
  row.ratio = static_cast<double>(row.deviators) / static_cast<double>(n);
  return row;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, const ProgressSink& progress) {
  validate(config);
  auto ns = config.n_values;
  auto ks = config.k_values;
  auto rhos = config.rho_values;
  std::sort(ns.begin(), ns.end());
  std::sort(ks.begin(), ks.end());
  std::sort(rhos.begin(), rhos.end());

  std::vector<Cell> cells;
  cells.reserve(ns.size() * ks.size() * rhos.size() * config.trials);
  for (auto n : ns) {
    for (auto k : ks) {
      for (double rho : rhos) {
        for (std::size_t t = 0; t < config.trials; ++t) cells.push_back({n, k, rho, t});
      }
    }
  }

  // Dispatch the most expensive cells first so a long cell does not start last.
  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&cells](std::size_t a, std::size_t b) {
    const auto cost = [](const Cell& c) { return c.n * std::min(c.n, c.k); };
    return cost(cells[a]) > cost(cells[b]);
  });

  std::vector<SweepRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  std::mutex error_mutex;
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      const std::size_t slot = next.fetch_add(1, std::memory_order_relaxed);
      if (slot >= order.size()) return;
      const Cell& c = cells[order[slot]];
      try {
        rows[order[slot]] = run_cell(c.n, c.k, c.rho, c.trial, config.master_seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(order.size());
        return;
      }
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(++done, cells.size());
      }
    }
  };

  std::size_t workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(cells.size(), 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

std::vector<AggregateRow> aggregate(std::span<const SweepRow> rows) {
  if (rows.empty()) throw std::invalid_argument("aggregate: no rows");
  std::map<std::tuple<std::size_t, std::size_t, double>, std::vector<double>> groups;
  for (const auto& row : rows) groups[{row.n, row.k, row.rho}].push_back(row.ratio);

  std::vector<AggregateRow> out;
  out.reserve(groups.size());
  for (const auto& [key, ratios] : groups) {
    AggregateRow agg;
    std::tie(agg.n, agg.k, agg.rho) = key;
    agg.trials = ratios.size();
    const double m = static_cast<double>(ratios.size());
    agg.mean_ratio = std::accumulate(ratios.begin(), ratios.end(), 0.0) / m;
    if (ratios.size() > 1) {
      double ss = 0.0;
      for (double x : ratios) ss += (x - agg.mean_ratio) * (x - agg.mean_ratio);
      agg.stderr_ratio = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
    }
    out.push_back(agg);
  }
  return out;
}

}  // namespace matchsim
