#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "matchsim/types.hpp"

namespace matchsim::testing {

// Two men, two women:
//   m1: w1 > w2     w1: m2 > m1
//   m2: w2 > w1     w2: m1 > m2
// Index 0 is m1/w1, index 1 is m2/w2.
inline Market two_by_two() {
  Market m;
  m.n = 2;
  m.k = 2;
  m.proposer_prefs = {{0, 1}, {1, 0}};
  m.recipient_prefs = {{1, 0}, {0, 1}};
  return m;
}

inline Market single_pair() {
  Market m;
  m.n = 1;
  m.k = 1;
  m.proposer_prefs = {{0}};
  m.recipient_prefs = {{0}};
  return m;
}

inline Matching matching_of(std::size_t n,
                            std::initializer_list<std::pair<AgentId, AgentId>> pairs) {
  Matching m(n);
  for (auto [p, r] : pairs) m.match(p, r);
  return m;
}

// Average ranks (1-based), ties share the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return ranks;
}

// Spearman rank correlation: Pearson correlation of the average ranks.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace matchsim::testing
