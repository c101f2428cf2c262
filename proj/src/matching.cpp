#include "matchsim/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <string>

#include "matchsim/rng.hpp"

namespace matchsim {

namespace {
constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();
}

RankTable::RankTable(const Market& market) : offsets_(market.n + 1, 0) {
  for (std::size_t r = 0; r < market.n; ++r) {
    offsets_[r + 1] = offsets_[r] + market.recipient_prefs[r].size();
  }
  entries_.reserve(offsets_.back());
  for (std::size_t r = 0; r < market.n; ++r) {
    const auto& list = market.recipient_prefs[r];
    for (std::uint32_t i = 0; i < list.size(); ++i) entries_.emplace_back(list[i], i);
    std::sort(entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[r]), entries_.end());
  }
}

std::size_t RankTable::rank(AgentId recipient, AgentId proposer) const {
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[recipient]);
  const auto last = entries_.begin() + static_cast<std::ptrdiff_t>(offsets_[recipient + 1]);
  const auto it = std::lower_bound(first, last, std::pair<AgentId, std::uint32_t>{proposer, 0});
  if (it == last || it->first != proposer) return kNotListed;
  return it->second;
}

// ---------------------------------------------------------------------------

ProposalEngine::ProposalEngine(const Market& market)
    : n_(market.n),
      offsets_(market.n + 1, 0),
      list_length_(market.n),
      cutoff_(market.n),
      next_(market.n, 0),
      holder_(market.n, kUnmatched),
      holder_rank_(market.n, kNoRank),
      next_stamp_(market.n, 0),
      holder_stamp_(market.n, 0) {
  validate(market);
  const RankTable ranks(market);
  for (std::size_t p = 0; p < n_; ++p) {
    offsets_[p + 1] = offsets_[p] + market.proposer_prefs[p].size();
  }
  targets_.reserve(offsets_.back());
  edge_rank_.reserve(offsets_.back());
  for (std::size_t p = 0; p < n_; ++p) {
    for (AgentId r : market.proposer_prefs[p]) {
      targets_.push_back(r);
      const std::size_t rank = ranks.rank(r, static_cast<AgentId>(p));
      edge_rank_.push_back(rank == kNotListed ? kNoRank : static_cast<std::uint32_t>(rank));
    }
  }
  for (std::size_t r = 0; r < n_; ++r) {
    list_length_[r] = static_cast<std::uint32_t>(market.recipient_prefs[r].size());
    cutoff_[r] = list_length_[r];
  }
}

void ProposalEngine::solve() {
  std::fill(next_.begin(), next_.end(), 0);
  std::fill(holder_.begin(), holder_.end(), kUnmatched);
  std::fill(holder_rank_.begin(), holder_rank_.end(), kNoRank);
  proposals_ = 0;

  std::deque<AgentId> free;
  for (AgentId p = 0; p < n_; ++p) free.push_back(p);
  while (!free.empty()) {
    const AgentId p = free.front();
    free.pop_front();
    const AgentId displaced = propose_until_held(p);
    if (displaced != kUnmatched) free.push_back(displaced);
  }
}

void ProposalEngine::solve_shuffled(std::uint64_t seed) {
  std::fill(next_.begin(), next_.end(), 0);
  std::fill(holder_.begin(), holder_.end(), kUnmatched);
  std::fill(holder_rank_.begin(), holder_rank_.end(), kNoRank);
  proposals_ = 0;

  auto has_entries = [this](AgentId p) { return offsets_[p] + next_[p] < offsets_[p + 1]; };
  Rng rng(seed);
  std::vector<AgentId> free;
  for (AgentId p = 0; p < n_; ++p) {
    if (has_entries(p)) free.push_back(p);
  }
  while (!free.empty()) {
    const std::size_t slot = rng.below(free.size());
    const AgentId p = free[slot];
    const AgentId left_free = propose_once(p);
    if (left_free == p && has_entries(p)) continue;
    free[slot] = free.back();
    free.pop_back();
    if (left_free != p && left_free != kUnmatched && has_entries(left_free)) {
      free.push_back(left_free);
    }
  }
}

AgentId ProposalEngine::propose_once(AgentId p) {
  const std::size_t edge = offsets_[p] + next_[p];
  note_next(p);
  ++next_[p];
  ++proposals_;

  const AgentId r = targets_[edge];
  const std::uint32_t rank = edge_rank_[edge];
  if (rank >= cutoff_[r]) return p;  // not acceptable to r
  if (holder_[r] == kUnmatched) {
    note_holder(r);
    holder_[r] = p;
    holder_rank_[r] = rank;
    return kUnmatched;
  }
  if (rank < holder_rank_[r]) {
    note_holder(r);
    const AgentId displaced = holder_[r];
    holder_[r] = p;
    holder_rank_[r] = rank;
    return displaced;
  }
  return p;
}

AgentId ProposalEngine::propose_until_held(AgentId p) {
  while (offsets_[p] + next_[p] < offsets_[p + 1]) {
    const AgentId left_free = propose_once(p);
    if (left_free != p) return left_free;
  }
  return kUnmatched;
}

Matching ProposalEngine::matching() const {
  Matching m(n_);
  for (AgentId r = 0; r < n_; ++r) {
    if (holder_[r] != kUnmatched) m.match(holder_[r], r);
  }
  return m;
}

void ProposalEngine::note_next(AgentId p) {
  if (journaling_ && next_stamp_[p] != epoch_) {
    next_stamp_[p] = epoch_;
    next_log_.emplace_back(p, next_[p]);
  }
}

void ProposalEngine::note_holder(AgentId r) {
  if (journaling_ && holder_stamp_[r] != epoch_) {
    holder_stamp_[r] = epoch_;
    holder_log_.emplace_back(r, holder_[r], holder_rank_[r]);
  }
}

void ProposalEngine::rollback() {
  for (const auto& [p, value] : next_log_) next_[p] = value;
  for (const auto& [r, who, rank] : holder_log_) {
    holder_[r] = who;
    holder_rank_[r] = rank;
  }
  next_log_.clear();
  holder_log_.clear();
}

ProposalEngine::Trial ProposalEngine::try_truncation(AgentId recipient, std::size_t length,
                                                     Matching* outcome) {
  if (recipient >= n_) throw std::out_of_range("try_truncation: recipient out of range");
  Trial trial;
  // Every rejection made in the solved run is still justified under a shorter prefix,
  // so the truthful state is a valid intermediate state of deferred acceptance under
  // the truncated list. If the current holder survives the cut nothing changes.
  if (holder_[recipient] == kUnmatched || holder_rank_[recipient] < length) {
    trial.partner = holder_[recipient];
    trial.partner_rank = holder_rank(recipient);
    if (outcome) *outcome = matching();
    return trial;
  }

  if (++epoch_ == 0) {
    std::fill(next_stamp_.begin(), next_stamp_.end(), 0);
    std::fill(holder_stamp_.begin(), holder_stamp_.end(), 0);
    epoch_ = 1;
  }
  journaling_ = true;
  const std::size_t proposals_before = proposals_;
  const std::uint32_t saved_cutoff = cutoff_[recipient];
  cutoff_[recipient] = static_cast<std::uint32_t>(length);

  note_holder(recipient);
  AgentId free = holder_[recipient];
  holder_[recipient] = kUnmatched;
  holder_rank_[recipient] = kNoRank;
  while (free != kUnmatched) free = propose_until_held(free);

  trial.partner = holder_[recipient];
  trial.partner_rank = holder_rank(recipient);
  trial.extra_proposals = proposals_ - proposals_before;
  if (outcome) *outcome = matching();

  rollback();
  cutoff_[recipient] = saved_cutoff;
  proposals_ = proposals_before;
  journaling_ = false;
  return trial;
}

// ---------------------------------------------------------------------------

DaResult run_deferred_acceptance(const Market& market, const DaOptions& options) {
  ProposalEngine engine(market);
  if (options.shuffle_seed) {
    engine.solve_shuffled(*options.shuffle_seed);
  } else {
    engine.solve();
  }
  return {engine.matching(), engine.proposals()};
}

std::vector<std::pair<AgentId, AgentId>> blocking_pairs(const Market& market,
                                                        const Matching& matching) {
  validate(market);
  validate(matching, market.n);
  const RankTable ranks(market);

  std::vector<std::pair<AgentId, AgentId>> out;
  for (AgentId p = 0; p < market.n; ++p) {
    const auto& list = market.proposer_prefs[p];
    const AgentId current = matching.proposer_to_recipient[p];
    // An unlisted partner is worse than being unmatched, so every listed entry beats it.
    const std::size_t p_current =
        current == kUnmatched ? list.size() : std::min(rank_in(list, current), list.size());
    for (std::size_t i = 0; i < p_current; ++i) {
      const AgentId r = list[i];
      const std::size_t r_rank_of_p = ranks.rank(r, p);
      if (r_rank_of_p == kNotListed) continue;
      const AgentId held = matching.recipient_to_proposer[r];
      const std::size_t r_current =
          held == kUnmatched ? ranks.list_length(r)
                             : std::min(ranks.rank(r, held), ranks.list_length(r));
      if (r_rank_of_p < r_current) out.emplace_back(p, r);
    }
  }
  return out;
}

bool is_stable(const Market& market, const Matching& matching) {
  return blocking_pairs(market, matching).empty();
}

std::vector<Matching> enumerate_stable_matchings(const Market& market, std::size_t max_n) {
  if (market.n > max_n) {
    throw std::invalid_argument("enumerate_stable_matchings: n = " + std::to_string(market.n) +
                                " exceeds oracle bound " + std::to_string(max_n));
  }
  validate(market);
  const RankTable ranks(market);
  std::vector<std::vector<AgentId>> options(market.n);
  for (AgentId p = 0; p < market.n; ++p) {
    for (AgentId r : market.proposer_prefs[p]) {
      if (ranks.rank(r, p) != kNotListed) options[p].push_back(r);
    }
  }

  std::vector<Matching> stable;
  Matching current(market.n);
  auto recurse = [&](auto&& self, AgentId p) -> void {
    if (p == market.n) {
      if (is_stable(market, current)) stable.push_back(current);
      return;
    }
    self(self, p + 1);
    for (AgentId r : options[p]) {
      if (current.recipient_to_proposer[r] != kUnmatched) continue;
      current.match(p, r);
      self(self, p + 1);
      current.proposer_to_recipient[p] = kUnmatched;
      current.recipient_to_proposer[r] = kUnmatched;
    }
  };
  recurse(recurse, 0);
  std::sort(stable.begin(), stable.end());
  return stable;
}

void for_each_ordered_subset(std::span<const AgentId> list, bool include_empty,
                             const std::function<void(std::span<const AgentId>)>& visit) {
  std::vector<AgentId> prefix;
  std::vector<bool> used(list.size(), false);
  auto recurse = [&](auto&& self) -> void {
    if (!prefix.empty() || include_empty) visit(prefix);
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (used[i]) continue;
      used[i] = true;
      prefix.push_back(list[i]);
      self(self);
      prefix.pop_back();
      used[i] = false;
    }
  };
  recurse(recurse);
}

std::optional<ProposerMisreport> find_proposer_misreport(const Market& market,
                                                         std::size_t max_list) {
  const Matching truthful = deferred_acceptance(market);
  Market scratch = market;
  std::optional<ProposerMisreport> found;

  for (AgentId p = 0; p < market.n && !found; ++p) {
    const PrefList& truth = market.proposer_prefs[p];
    if (truth.size() > max_list) {
      throw std::invalid_argument("find_proposer_misreport: list of proposer " +
                                  std::to_string(p) + " exceeds oracle bound");
    }
    const AgentId before = truthful.proposer_to_recipient[p];
    const std::size_t truthful_rank = before == kUnmatched ? kNotListed : rank_in(truth, before);

    for_each_ordered_subset(truth, true, [&](std::span<const AgentId> report) {
      if (found) return;
      scratch.proposer_prefs[p].assign(report.begin(), report.end());
      const AgentId after = deferred_acceptance(scratch).proposer_to_recipient[p];
      const std::size_t rank = after == kUnmatched ? kNotListed : rank_in(truth, after);
      if (rank < truthful_rank) {
        found = ProposerMisreport{p, scratch.proposer_prefs[p], truthful_rank, rank};
      }
    });
    scratch.proposer_prefs[p] = truth;
  }
  return found;
}

}  // namespace matchsim
