#include "matchsim/verify.hpp"

#include <algorithm>
#include <stdexcept>

#include "matchsim/deviation.hpp"
#include "matchsim/matching.hpp"
#include "matchsim/prefgen.hpp"
#include "matchsim/rng.hpp"

namespace matchsim {

namespace {

bool proposer_optimal(const Market& market) {
  const Matching da = deferred_acceptance(market);
  const auto stable = enumerate_stable_matchings(market);
  if (!std::binary_search(stable.begin(), stable.end(), da)) return false;
  for (const auto& other : stable) {
    for (AgentId p = 0; p < market.n; ++p) {
      const auto& list = market.proposer_prefs[p];
      if (rank_in(list, da.proposer_to_recipient[p]) >
          rank_in(list, other.proposer_to_recipient[p])) {
        return false;
      }
    }
  }
  return true;
}

bool replay_sound(const Market& market) {
  for (const auto& d : count_deviators(market).deviations) {
    const auto& truth = market.recipient_prefs[d.recipient];
    const std::span<const AgentId> prefix(truth.data(), d.report_length);
    if (!is_useful_deviation(market, d.recipient, prefix)) return false;
    if (d.deviated_rank >= d.truthful_rank) return false;
  }
  return true;
}

bool unmatched_futile(const Market& market) {
  const Matching truthful = deferred_acceptance(market);
  for (const auto& d : count_deviators(market).deviations) {
    if (truthful.recipient_to_proposer[d.recipient] == kUnmatched) return false;
  }
  return true;
}

}  // namespace

bool OracleReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const OracleCheck& c) { return c.failures == 0; });
}

Market oracle_market(const OracleConfig& config, std::size_t index) {
  if (config.max_n == 0 || config.max_k == 0 || config.rho_values.empty()) {
    throw std::invalid_argument("oracle: bounds must be positive and rho grid non-empty");
  }
  Rng pick(mix64(config.seed ^ mix64(index)));
  const std::size_t n = 1 + pick.below(config.max_n);
  const std::size_t k = 1 + pick.below(config.max_k);
  const double rho = config.rho_values[pick.below(config.rho_values.size())];
  return generate_market(n, k, rho, pick.next_u64());
}

OracleReport run_oracle_suite(const OracleConfig& config) {
  if (config.max_n > kDefaultEnumerationBound) {
    throw std::invalid_argument("oracle: max_n above the enumeration bound of " +
                                std::to_string(kDefaultEnumerationBound));
  }
  const std::size_t oracle_bound = std::max(config.max_n, config.max_k);
  struct Named {
    const char* name;
    std::function<bool(const Market&)> holds;
  };
  const std::vector<Named> suite = {
      {"stability", [](const Market& m) { return is_stable(m, deferred_acceptance(m)); }},
      {"proposer-optimality", proposer_optimal},
      {"proposer-truthfulness",
       [oracle_bound](const Market& m) { return !find_proposer_misreport(m, oracle_bound); }},
      {"truncation-sufficiency",
       [oracle_bound](const Market& m) {
         return brute_force_deviators(m, oracle_bound) == count_deviators(m).deviator_count;
       }},
      {"resume-matches-rerun",
       [](const Market& m) { return count_deviators(m) == count_deviators_from_scratch(m); }},
      {"replay-soundness", replay_sound},
      {"unmatched-futility", unmatched_futile},
  };

  OracleReport report;
  for (const auto& check : suite) report.checks.push_back(OracleCheck{check.name, 0, 0, {}});
  for (std::size_t i = 0; i < config.cases; ++i) {
    const Market market = oracle_market(config, i);
    for (std::size_t c = 0; c < suite.size(); ++c) {
      auto& result = report.checks[c];
      ++result.cases;
      if (suite[c].holds(market)) continue;
      if (result.failures++ == 0) {
        const auto& holds = suite[c].holds;
        result.counterexample =
            format_market(shrink_market(market, [&holds](const Market& m) { return !holds(m); }));
      }
    }
  }
  return report;
}

Market shrink_market(Market market, const std::function<bool(const Market&)>& fails) {
  auto without_pair = [](const Market& m, AgentId p, AgentId r) {
    Market smaller = m;
    auto& plist = smaller.proposer_prefs[p];
    plist.erase(std::remove(plist.begin(), plist.end(), r), plist.end());
    auto& rlist = smaller.recipient_prefs[r];
    rlist.erase(std::remove(rlist.begin(), rlist.end(), p), rlist.end());
    return smaller;
  };

  bool progress = true;
  while (progress) {
    progress = false;
    for (AgentId p = 0; p < market.n && !progress; ++p) {
      for (AgentId r : market.proposer_prefs[p]) {
        Market candidate = without_pair(market, p, r);
        if (fails(candidate)) {
          market = std::move(candidate);
          progress = true;
          break;
        }
      }
    }
    for (AgentId r = 0; r < market.n && !progress; ++r) {
      for (AgentId p : market.recipient_prefs[r]) {
        Market candidate = without_pair(market, p, r);
        if (fails(candidate)) {
          market = std::move(candidate);
          progress = true;
          break;
        }
      }
    }
  }
  return market;
}

}  // namespace matchsim
