#pragma once

#include <span>
#include <vector>

#include "matchsim/matching.hpp"
#include "matchsim/types.hpp"

namespace matchsim {

/// One recipient's successful truncation.
struct Deviation {
  AgentId recipient = 0;
  // Length of the first successful prefix in the search order (longest first),
  // i.e. the smallest truncation that pays off.
  std::size_t report_length = 0;
  std::size_t truthful_rank = 0;
  std::size_t deviated_rank = 0;

  std::size_t rank_gain() const { return truthful_rank - deviated_rank; }
  friend bool operator==(const Deviation&, const Deviation&) = default;
};

struct DeviationReport {
  std::size_t deviator_count = 0;
  std::vector<Deviation> deviations;  // ascending recipient

  friend bool operator==(const DeviationReport&, const DeviationReport&) = default;
};

/// Proper prefixes of `list`, longest first: lengths L-1, L-2, ..., 1.
std::vector<PrefList> truncations(std::span<const AgentId> list);

/// Reruns deferred acceptance with `report` substituted for the recipient's list and
/// tells whether her new partner ranks strictly higher in her true list. Ending up
/// unmatched is never a gain. `report` must be a prefix of her true list.
bool is_useful_deviation(const Market& market, AgentId recipient, std::span<const AgentId> report);

/// Counts recipients holding a useful truncation. Each recipient's prefixes are tried
/// longest first and the search stops at the first success. Truncations are evaluated
/// by resuming deferred acceptance from the truthful outcome.
DeviationReport count_deviators(const Market& market);

/// Same contract as count_deviators, but every truncation reruns deferred acceptance
/// from scratch on a copy of the market.
DeviationReport count_deviators_from_scratch(const Market& market);

inline constexpr std::size_t kDefaultDeviationOracleBound = 4;

/// Number of recipients for whom some strict ordering of some non-empty subset of
/// the true list is a useful misreport. Exhaustive; rejects markets with n or any
/// recipient list above `max_n`.
std::size_t brute_force_deviators(const Market& market,
                                  std::size_t max_n = kDefaultDeviationOracleBound);

}  // namespace matchsim
