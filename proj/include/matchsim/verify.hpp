#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matchsim/types.hpp"

namespace matchsim {

struct OracleConfig {
  std::size_t max_n = 4;  // markets have n drawn from [1, max_n]
  std::size_t max_k = 3;  // and k from [1, max_k]
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  std::vector<double> rho_values = {0.05, 1.0, 3.0};
};

struct OracleCheck {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  // Shrunk market text of the first failure, if any.
  std::string counterexample;
};

struct OracleReport {
  std::vector<OracleCheck> checks;
  bool ok() const;
};

/// Market for oracle case `index`: n, k and rho drawn from `config`'s ranges.
Market oracle_market(const OracleConfig& config, std::size_t index);

/// Runs every brute-force check (stability, proposer optimality, proposer
/// truthfulness, truncation sufficiency, resume vs. from-scratch counting, replay
/// soundness, unmatched-recipient futility) on `config.cases` seeded markets.
OracleReport run_oracle_suite(const OracleConfig& config);

/// Greedily deletes preference entries (both directions of a pair at once) while
/// `fails` keeps returning true. The result still fails and no single further
/// deletion does.
Market shrink_market(Market market, const std::function<bool(const Market&)>& fails);

}  // namespace matchsim
