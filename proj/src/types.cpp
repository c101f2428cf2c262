#include "matchsim/types.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace matchsim {

std::size_t Matching::pair_count() const {
  return static_cast<std::size_t>(std::count_if(proposer_to_recipient.begin(),
                                                proposer_to_recipient.end(),
                                                [](AgentId r) { return r != kUnmatched; }));
}

std::size_t rank_in(std::span<const AgentId> list, AgentId agent) {
  return static_cast<std::size_t>(std::find(list.begin(), list.end(), agent) - list.begin());
}

bool is_valid_pref_list(std::span<const AgentId> list, std::size_t n) {
  if (list.size() > n) return false;
  std::vector<bool> seen(n, false);
  for (AgentId a : list) {
    if (a >= n || seen[a]) return false;
    seen[a] = true;
  }
  return true;
}

void validate(const Market& market) {
  if (market.proposer_prefs.size() != market.n || market.recipient_prefs.size() != market.n) {
    throw std::invalid_argument("market: expected " + std::to_string(market.n) +
                                " preference lists per side");
  }
  for (std::size_t i = 0; i < market.n; ++i) {
    if (!is_valid_pref_list(market.proposer_prefs[i], market.n)) {
      throw std::invalid_argument("market: malformed list for proposer " + std::to_string(i));
    }
    if (!is_valid_pref_list(market.recipient_prefs[i], market.n)) {
      throw std::invalid_argument("market: malformed list for recipient " + std::to_string(i));
    }
  }
}

bool is_mutual(const Market& market) {
  std::size_t proposer_entries = 0;
  for (const auto& list : market.proposer_prefs) proposer_entries += list.size();
  std::size_t recipient_entries = 0;
  for (AgentId r = 0; r < market.n; ++r) {
    for (AgentId p : market.recipient_prefs[r]) {
      if (rank_in(market.proposer_prefs[p], r) == market.proposer_prefs[p].size()) return false;
      ++recipient_entries;
    }
  }
  // Lists are duplicate-free, so equal totals plus one-way inclusion give equality.
  return proposer_entries == recipient_entries;
}

void validate(const Matching& matching, std::size_t n) {
  if (matching.proposer_to_recipient.size() != n || matching.recipient_to_proposer.size() != n) {
    throw std::invalid_argument("matching: size mismatch");
  }
  for (AgentId p = 0; p < n; ++p) {
    const AgentId r = matching.proposer_to_recipient[p];
    if (r == kUnmatched) continue;
    if (r >= n || matching.recipient_to_proposer[r] != p) {
      throw std::invalid_argument("matching: maps are not mutually inverse at proposer " +
                                  std::to_string(p));
    }
  }
  for (AgentId r = 0; r < n; ++r) {
    const AgentId p = matching.recipient_to_proposer[r];
    if (p == kUnmatched) continue;
    if (p >= n || matching.proposer_to_recipient[p] != r) {
      throw std::invalid_argument("matching: maps are not mutually inverse at recipient " +
                                  std::to_string(r));
    }
  }
}

}  // namespace matchsim
