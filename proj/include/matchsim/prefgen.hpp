#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "matchsim/rng.hpp"
#include "matchsim/types.hpp"

namespace matchsim {

/// Inverse-exponential popularity profile w_j = exp(-rho * j / n), j = 0..n-1.
/// rho = 0 is uniform; larger rho concentrates demand on low indices.
PopularityWeights popularity_weights(std::size_t n, double rho);

/// Draws `count` distinct indices, each draw proportional to the weights still
/// in the urn. Returned in draw order.
std::vector<AgentId> sample_without_replacement(std::span<const double> weights,
                                                std::size_t count, Rng& rng);

/// Every proposer gets min(k, n) distinct recipients drawn from `weights`.
std::vector<PrefList> sample_proposer_prefs(std::size_t n, std::size_t k,
                                            std::span<const double> weights, Rng& rng);

/// Recipient r ranks exactly the proposers that listed r, ordered by a weighted
/// draw over `proposer_weights`. Recipients nobody applied to get an empty list.
std::vector<PrefList> derive_recipient_prefs(std::span<const PrefList> proposer_prefs,
                                             std::span<const double> proposer_weights,
                                             Rng& rng);

/// Full market from (n, k, rho, seed). Bit-identical for identical inputs.
Market generate_market(std::size_t n, std::size_t k, double rho, std::uint64_t seed);

// Debug text format, one agent per line:
//   P0: 3 1 4
//   R0: 2
// Lines starting with '#' are ignored.
std::string format_market(const Market& market);
Market parse_market(std::string_view text);

}  // namespace matchsim
