#include "matchsim/deviation.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace matchsim {

namespace {

std::size_t partner_rank(const Market& market, const Matching& matching, AgentId recipient) {
  const AgentId p = matching.recipient_to_proposer[recipient];
  return p == kUnmatched ? kNotListed : rank_in(market.recipient_prefs[recipient], p);
}

bool is_prefix(std::span<const AgentId> report, std::span<const AgentId> truth) {
  return report.size() <= truth.size() && std::equal(report.begin(), report.end(), truth.begin());
}

}  // namespace

std::vector<PrefList> truncations(std::span<const AgentId> list) {
  std::vector<PrefList> out;
  for (std::size_t length = list.size(); length-- > 1;) {
    out.emplace_back(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(length));
  }
  return out;
}

bool is_useful_deviation(const Market& market, AgentId recipient,
                         std::span<const AgentId> report) {
  if (recipient >= market.n) throw std::out_of_range("is_useful_deviation: bad recipient");
  if (!is_prefix(report, market.recipient_prefs[recipient])) {
    throw std::invalid_argument("is_useful_deviation: report is not a prefix of the true list");
  }
  const std::size_t before = partner_rank(market, deferred_acceptance(market), recipient);
  Market scratch = market;
  scratch.recipient_prefs[recipient].assign(report.begin(), report.end());
  const std::size_t after = partner_rank(market, deferred_acceptance(scratch), recipient);
  return after < before;
}

DeviationReport count_deviators(const Market& market) {
  ProposalEngine engine(market);
  engine.solve();

  DeviationReport report;
  for (AgentId r = 0; r < market.n; ++r) {
    const std::size_t truthful_rank = engine.holder_rank(r);
    for (std::size_t length = engine.list_length(r); length-- > 1;) {
      const auto trial = engine.try_truncation(r, length);
      if (trial.partner_rank < truthful_rank) {
        report.deviations.push_back({r, length, truthful_rank, trial.partner_rank});
        break;
      }
    }
  }
  report.deviator_count = report.deviations.size();
  return report;
}

DeviationReport count_deviators_from_scratch(const Market& market) {
  const Matching truthful = deferred_acceptance(market);
  Market scratch = market;

  DeviationReport report;
  for (AgentId r = 0; r < market.n; ++r) {
    const PrefList& truth = market.recipient_prefs[r];
    const std::size_t truthful_rank = partner_rank(market, truthful, r);
    for (const PrefList& candidate : truncations(truth)) {
      scratch.recipient_prefs[r] = candidate;
      const std::size_t rank = partner_rank(market, deferred_acceptance(scratch), r);
      if (rank < truthful_rank) {
        report.deviations.push_back({r, candidate.size(), truthful_rank, rank});
        break;
      }
    }
    scratch.recipient_prefs[r] = truth;
  }
  report.deviator_count = report.deviations.size();
  return report;
}

std::size_t brute_force_deviators(const Market& market, std::size_t max_n) {
  if (market.n > max_n) {
    throw std::invalid_argument("brute_force_deviators: n = " + std::to_string(market.n) +
                                " exceeds oracle bound " + std::to_string(max_n));
  }
  const Matching truthful = deferred_acceptance(market);
  Market scratch = market;
  std::size_t count = 0;

  for (AgentId r = 0; r < market.n; ++r) {
    const PrefList& truth = market.recipient_prefs[r];
    if (truth.size() > max_n) {
      throw std::invalid_argument("brute_force_deviators: list of recipient " +
                                  std::to_string(r) + " exceeds oracle bound");
    }
    const std::size_t truthful_rank = partner_rank(market, truthful, r);
    bool useful = false;
    for_each_ordered_subset(truth, false, [&](std::span<const AgentId> candidate) {
      if (useful) return;
      scratch.recipient_prefs[r].assign(candidate.begin(), candidate.end());
      useful = partner_rank(market, deferred_acceptance(scratch), r) < truthful_rank;
    });
    scratch.recipient_prefs[r] = truth;
    if (useful) ++count;
  }
  return count;
}

}  // namespace matchsim
