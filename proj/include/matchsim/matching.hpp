#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <tuple>
#include <span>
#include <utility>
#include <vector>

#include "matchsim/types.hpp"

namespace matchsim {

inline constexpr std::size_t kNotListed = static_cast<std::size_t>(-1);

/// Rank of every proposer in every recipient's list (0 = best), with O(log L) lookup.
class RankTable {
 public:
  explicit RankTable(const Market& market);

  /// kNotListed when `proposer` is absent from the recipient's list.
  std::size_t rank(AgentId recipient, AgentId proposer) const;
  std::size_t list_length(AgentId recipient) const {
    return offsets_[recipient + 1] - offsets_[recipient];
  }

 private:
  std::vector<std::size_t> offsets_;
  // Per recipient, (proposer, rank) sorted by proposer.
  std::vector<std::pair<AgentId, std::uint32_t>> entries_;
};

struct DaOptions {
  // When set, free proposers are picked at random (one proposal per pick) instead
  // of being served from a FIFO queue. The outcome must not depend on it.
  std::optional<std::uint64_t> shuffle_seed;
};

struct DaResult {
  Matching matching;
  std::size_t proposals = 0;
};

/// Proposer-proposing deferred acceptance over incomplete lists. A proposal to a
/// recipient who does not list the proposer is rejected and consumes the entry.
DaResult run_deferred_acceptance(const Market& market, const DaOptions& options = {});

inline Matching deferred_acceptance(const Market& market) {
  return run_deferred_acceptance(market).matching;
}

/// Mutually listed pairs (p, r) that both strictly prefer each other to their
/// assignment under `matching`. Being unmatched ranks below every listed agent.
std::vector<std::pair<AgentId, AgentId>> blocking_pairs(const Market& market,
                                                        const Matching& matching);

bool is_stable(const Market& market, const Matching& matching);

inline constexpr std::size_t kDefaultEnumerationBound = 6;

/// Every stable matching, by exhaustive search over injective partial assignments
/// restricted to mutually listed pairs. Sorted. Rejects n above `max_n`.
std::vector<Matching> enumerate_stable_matchings(const Market& market,
                                                 std::size_t max_n = kDefaultEnumerationBound);

/// Calls `visit` with every strict ordering of every subset of `list` (the empty
/// report included when `include_empty`).
void for_each_ordered_subset(std::span<const AgentId> list, bool include_empty,
                             const std::function<void(std::span<const AgentId>)>& visit);

struct ProposerMisreport {
  AgentId proposer = 0;
  PrefList report;
  std::size_t truthful_rank = 0;  // kNotListed = unmatched
  std::size_t misreport_rank = 0;
};

/// Searches every ordering of every subset of each proposer's true list for a report
/// that earns a strictly better partner under the true list. Proposers with lists
/// longer than `max_list` are rejected.
std::optional<ProposerMisreport> find_proposer_misreport(const Market& market,
                                                         std::size_t max_list = 4);

/// Low-level solver shared by the public entry points and by deviation counting.
/// Lists are stored flat, each proposal edge carries the proposer's rank at the
/// target recipient, and a recipient's acceptable set is the prefix of her list
/// below `cutoff`. After a solve, a truncation can be evaluated by resuming from the
/// solved state and rolling back afterwards.
class ProposalEngine {
 public:
  explicit ProposalEngine(const Market& market);

  std::size_t size() const { return n_; }

  /// Clears all state and runs deferred acceptance to completion.
  void solve();
  void solve_shuffled(std::uint64_t seed);

  AgentId holder(AgentId recipient) const { return holder_[recipient]; }
  /// Rank of the current holder in the recipient's true list; kNotListed if none.
  std::size_t holder_rank(AgentId recipient) const {
    return holder_[recipient] == kUnmatched ? kNotListed : holder_rank_[recipient];
  }
  std::size_t list_length(AgentId recipient) const { return list_length_[recipient]; }
  std::size_t proposals() const { return proposals_; }
  Matching matching() const;

  struct Trial {
    AgentId partner = kUnmatched;
    std::size_t partner_rank = kNotListed;  // rank in the true list
    std::size_t extra_proposals = 0;
  };

  /// Outcome of `recipient` reporting only the first `length` entries of her list,
  /// given the current solved state. State is restored before returning. If
  /// `outcome` is non-null it receives the full matching under the truncation.
  Trial try_truncation(AgentId recipient, std::size_t length, Matching* outcome = nullptr);

 private:
  // Proposes down p's list until someone holds p or the list runs out. Returns the
  // proposer left free (displaced holder) or kUnmatched.
  AgentId propose_until_held(AgentId p);
  // Single proposal; returns the proposer left free afterwards (p itself when
  // rejected, the displaced holder, or kUnmatched).
  AgentId propose_once(AgentId p);

  void note_next(AgentId p);
  void note_holder(AgentId r);
  void rollback();

  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<AgentId> targets_;
  std::vector<std::uint32_t> edge_rank_;  // UINT32_MAX when not listed
  std::vector<std::uint32_t> list_length_;
  std::vector<std::uint32_t> cutoff_;

  std::vector<std::uint32_t> next_;
  std::vector<AgentId> holder_;
  std::vector<std::uint32_t> holder_rank_;
  std::size_t proposals_ = 0;

  // Undo log for try_truncation: first-touch values within the current trial.
  bool journaling_ = false;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> next_stamp_;
  std::vector<std::uint32_t> holder_stamp_;
  std::vector<std::pair<AgentId, std::uint32_t>> next_log_;
  std::vector<std::tuple<AgentId, AgentId, std::uint32_t>> holder_log_;
};

}  // namespace matchsim
