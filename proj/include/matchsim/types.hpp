#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace matchsim {

/// Index of an agent on one side of the market, in [0, n).
using AgentId = std::uint32_t;

inline constexpr AgentId kUnmatched = std::numeric_limits<AgentId>::max();

/// Strict ranking over agents of the opposite side, most preferred first.
/// May be shorter than n; unlisted agents are unacceptable.
using PrefList = std::vector<AgentId>;

/// Popularity weight per agent; index 0 is the most popular.
using PopularityWeights = std::vector<double>;

/// A one-to-one market with equal sides of size n.
struct Market {
  std::size_t n = 0;
  std::size_t k = 0;
  double rho = 0.0;
  std::vector<PrefList> proposer_prefs;
  std::vector<PrefList> recipient_prefs;
  // Weights the lists were sampled from (empty for hand-built markets).
  PopularityWeights proposer_weights;
  PopularityWeights recipient_weights;

  friend bool operator==(const Market&, const Market&) = default;
};

/// Partial one-to-one assignment. Both directions are kept in sync.
struct Matching {
  std::vector<AgentId> proposer_to_recipient;
  std::vector<AgentId> recipient_to_proposer;

  Matching() = default;
  explicit Matching(std::size_t n)
      : proposer_to_recipient(n, kUnmatched), recipient_to_proposer(n, kUnmatched) {}

  std::size_t size() const { return proposer_to_recipient.size(); }
  std::size_t pair_count() const;

  void match(AgentId proposer, AgentId recipient) {
    proposer_to_recipient[proposer] = recipient;
    recipient_to_proposer[recipient] = proposer;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching& a, const Matching& b) {
    return a.proposer_to_recipient <=> b.proposer_to_recipient;
  }
};

/// Position of `agent` in `list`, or list.size() when absent.
std::size_t rank_in(std::span<const AgentId> list, AgentId agent);

/// Checks the structural PrefList invariants against an opposite side of size n.
bool is_valid_pref_list(std::span<const AgentId> list, std::size_t n);

/// Throws std::invalid_argument if sizes or any list are malformed.
void validate(const Market& market);

/// p lists r exactly when r lists p.
bool is_mutual(const Market& market);

/// Throws std::invalid_argument unless the two maps are consistent inverses.
void validate(const Matching& matching, std::size_t n);

}  // namespace matchsim
