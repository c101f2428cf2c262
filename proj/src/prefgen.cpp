#include "matchsim/prefgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace matchsim {

namespace {

// Fenwick tree over weights supporting "draw proportional to weight, then remove".
class WeightedUrn {
 public:
  explicit WeightedUrn(std::span<const double> weights)
      : weights_(weights.begin(), weights.end()), tree_(weights.size() + 1, 0.0) {
    const std::size_t n = weights_.size();
    for (std::size_t i = 1; i <= n; ++i) {
      tree_[i] += weights_[i - 1];
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) tree_[parent] += tree_[i];
    }
    top_step_ = 1;
    while (top_step_ * 2 <= n) top_step_ *= 2;
  }

  std::size_t size() const { return weights_.size(); }

  double total() const {
    double sum = 0.0;
    for (std::size_t i = weights_.size(); i > 0; i -= i & (~i + 1)) sum += tree_[i];
    return sum;
  }

  AgentId draw(Rng& rng) {
    double target = rng.uniform01() * total();
    std::size_t pos = 0;
    for (std::size_t step = top_step_; step > 0; step >>= 1) {
      if (pos + step <= weights_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    pos = settle(pos);
    remove(pos);
    return static_cast<AgentId>(pos);
  }

 private:
  // Rounding residue in the tree can land the search on an exhausted slot (or one
  // past the end); move to the nearest live one, scanning forward first.
  std::size_t settle(std::size_t pos) const {
    const std::size_t n = weights_.size();
    for (std::size_t i = pos; i < n; ++i) {
      if (weights_[i] > 0.0) return i;
    }
    for (std::size_t i = std::min(pos, n); i-- > 0;) {
      if (weights_[i] > 0.0) return i;
    }
    throw std::logic_error("WeightedUrn: drawing from an empty urn");
  }

  void remove(std::size_t pos) {
    const double w = weights_[pos];
    weights_[pos] = 0.0;
    for (std::size_t i = pos + 1; i <= weights_.size(); i += i & (~i + 1)) tree_[i] -= w;
  }

  std::vector<double> weights_;
  std::vector<double> tree_;
  std::size_t top_step_ = 1;
};

}  // namespace

PopularityWeights popularity_weights(std::size_t n, double rho) {
  if (n == 0) throw std::invalid_argument("popularity_weights: n must be at least 1");
  if (!std::isfinite(rho) || rho < 0.0) {
    throw std::invalid_argument("popularity_weights: rho must be finite and non-negative");
  }
  PopularityWeights w(n);
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = std::exp(-rho * static_cast<double>(j) / static_cast<double>(n));
  }
  return w;
}

std::vector<AgentId> sample_without_replacement(std::span<const double> weights,
                                                std::size_t count, Rng& rng) {
  if (count > weights.size()) {
    throw std::invalid_argument("sample_without_replacement: count exceeds population");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("sample_without_replacement: weights must be positive");
    }
  }
  WeightedUrn urn(weights);
  std::vector<AgentId> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(urn.draw(rng));
  return out;
}

std::vector<PrefList> sample_proposer_prefs(std::size_t n, std::size_t k,
                                            std::span<const double> weights, Rng& rng) {
  if (k == 0) throw std::invalid_argument("sample_proposer_prefs: k must be at least 1");
  if (weights.size() != n) {
    throw std::invalid_argument("sample_proposer_prefs: need one weight per recipient");
  }
  const std::size_t length = std::min(k, n);
  std::vector<PrefList> prefs;
  prefs.reserve(n);
  for (std::size_t p = 0; p < n; ++p) {
    prefs.push_back(sample_without_replacement(weights, length, rng));
  }
  return prefs;
}

std::vector<PrefList> derive_recipient_prefs(std::span<const PrefList> proposer_prefs,
                                             std::span<const double> proposer_weights,
                                             Rng& rng) {
  const std::size_t n = proposer_prefs.size();
  if (proposer_weights.size() != n) {
    throw std::invalid_argument("derive_recipient_prefs: need one weight per proposer");
  }
  std::vector<std::vector<AgentId>> applicants(n);
  for (AgentId p = 0; p < n; ++p) {
    for (AgentId r : proposer_prefs[p]) applicants.at(r).push_back(p);
  }

  std::vector<PrefList> prefs(n);
  std::vector<double> local;
  for (AgentId r = 0; r < n; ++r) {
    const auto& pool = applicants[r];
    local.clear();
    for (AgentId p : pool) local.push_back(proposer_weights[p]);
    const auto order = sample_without_replacement(local, pool.size(), rng);
    prefs[r].reserve(pool.size());
    for (AgentId slot : order) prefs[r].push_back(pool[slot]);
  }
  return prefs;
}

Market generate_market(std::size_t n, std::size_t k, double rho, std::uint64_t seed) {
  if (k == 0) throw std::invalid_argument("generate_market: k must be at least 1");
  Market m;
  m.n = n;
  m.k = k;
  m.rho = rho;
  m.recipient_weights = popularity_weights(n, rho);
  m.proposer_weights = m.recipient_weights;

  Rng rng(seed);
  m.proposer_prefs = sample_proposer_prefs(n, k, m.recipient_weights, rng);
  m.recipient_prefs = derive_recipient_prefs(m.proposer_prefs, m.proposer_weights, rng);
  return m;
}

std::string format_market(const Market& market) {
  std::ostringstream out;
  auto emit = [&out](char side, std::size_t index, const PrefList& list) {
    out << side << index << ':';
    for (AgentId a : list) out << ' ' << a;
    out << '\n';
  };
  for (std::size_t p = 0; p < market.n; ++p) emit('P', p, market.proposer_prefs[p]);
  for (std::size_t r = 0; r < market.n; ++r) emit('R', r, market.recipient_prefs[r]);
  return out.str();
}

Market parse_market(std::string_view text) {
  std::vector<std::pair<std::size_t, PrefList>> proposers;
  std::vector<std::pair<std::size_t, PrefList>> recipients;
  std::size_t line_no = 0;

  auto fail = [&line_no](const std::string& what) {
    throw std::invalid_argument("market text line " + std::to_string(line_no) + ": " + what);
  };
  auto parse_uint = [&fail](std::string_view token) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      fail("bad integer '" + std::string(token) + "'");
    }
    return value;
  };

  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos || colon < 2) fail("expected 'P<i>:' or 'R<i>:'");
    const char side = line.front();
    if (side != 'P' && side != 'R') fail("unknown side marker");
    const std::size_t index = parse_uint(line.substr(1, colon - 1));

    PrefList list;
    std::string_view rest = line.substr(colon + 1);
    while (!rest.empty()) {
      const auto start = rest.find_first_not_of(' ');
      if (start == std::string_view::npos) break;
      rest.remove_prefix(start);
      const auto end = rest.find(' ');
      list.push_back(static_cast<AgentId>(parse_uint(rest.substr(0, end))));
      rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
    }
    (side == 'P' ? proposers : recipients).emplace_back(index, std::move(list));
  }

  if (proposers.size() != recipients.size()) {
    throw std::invalid_argument("market text: sides have different sizes");
  }
  Market m;
  m.n = proposers.size();
  m.proposer_prefs.resize(m.n);
  m.recipient_prefs.resize(m.n);
  std::vector<bool> seen_p(m.n, false), seen_r(m.n, false);
  for (auto& [i, list] : proposers) {
    if (i >= m.n || seen_p[i]) throw std::invalid_argument("market text: bad proposer index");
    seen_p[i] = true;
    m.k = std::max(m.k, list.size());
    m.proposer_prefs[i] = std::move(list);
  }
  for (auto& [i, list] : recipients) {
    if (i >= m.n || seen_r[i]) throw std::invalid_argument("market text: bad recipient index");
    seen_r[i] = true;
    m.recipient_prefs[i] = std::move(list);
  }
  validate(m);
  return m;
}

}  // namespace matchsim
