// Copyright 2026 The toksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "toksim/oracles.hpp"

#include <algorithm>
#include <chrono>

#include "toksim/errors.hpp"
#include "toksim/lattice.hpp"
#include "toksim/text.hpp"

namespace toksim {

namespace {

using Clock = std::chrono::steady_clock;

// Shared search metering.
struct Meter {
  const OracleBudget& budget;
  Clock::time_point start = Clock::now();
  std::uint64_t nodes = 0;

  void tick() {
    if (++nodes > budget.max_nodes) {
      throw BudgetError("oracle exceeded node budget (" +
                        std::to_string(budget.max_nodes) + " nodes)");
    }
    if ((nodes & 0xfff) == 0) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start).count();
      if (elapsed > budget.max_seconds) {
        throw BudgetError("oracle exceeded time budget (" +
                          std::to_string(budget.max_seconds) + "s)");
      }
    }
  }
};

// Unicode scalars remaining at each byte offset of s; the tightest generic
// bound on how many tokens can still be emitted.
std::vector<std::size_t> scalars_remaining(const std::string& s) {
  std::vector<std::size_t> rem(s.size() + 1, 0);
  // walk scalar boundaries backwards
  const auto scalars = decode_utf8(s);
  std::size_t off = s.size();
  rem[off] = 0;
  for (std::size_t i = scalars.size(); i-- > 0;) {
    off -= encode_utf8(scalars[i]).size();
    rem[off] = scalars.size() - i;
  }
  return rem;
}

struct LongestSearch {
  const GenerativeModel& model;
  const std::string& s;
  const SamplingRule& rule;
  Temperature temp;
  Meter meter;
  std::vector<std::size_t> rem;

  std::vector<TokenId> prefix;
  double running_prob = 1.0;
  std::optional<std::vector<TokenId>> best;

  void dfs(std::size_t off) {
    meter.tick();
    if (off == s.size()) {
      if (!best || prefix.size() > best->size()) best = prefix;
      return;
    }
    // Even all-single-character continuation cannot beat the incumbent.
    if (best && prefix.size() + rem[off] <= best->size()) return;

    const auto span = std::span<const TokenId>(prefix.data(), prefix.size());
    const auto matches = model.vocab().matches_at(s, off);

    if (std::holds_alternative<TopP>(rule) ||
        std::holds_alternative<TopK>(rule)) {
      const auto allowed = allowed_set(model, span, rule, temp);
      for (TokenId id : matches) {
        if (std::find(allowed.begin(), allowed.end(), id) == allowed.end()) {
          continue;
        }
        prefix.push_back(id);
        dfs(off + model.vocab().rendering(id).size());
        prefix.pop_back();
      }
      return;
    }

    const auto dist = next_dist(model, span, temp);
    const bool thresholded = std::holds_alternative<SequenceThreshold>(rule);
    const double eps =
        thresholded ? std::get<SequenceThreshold>(rule).eps : 0.0;
    for (TokenId id : matches) {
      const double p = dist[id];
      if (!(p > 0.0)) continue;
      const double next_prob = running_prob * p;
      // Probabilities only shrink along a path, so this prune is exact.
      if (thresholded && next_prob < eps) continue;
      const double saved = running_prob;
      running_prob = next_prob;
      prefix.push_back(id);
      dfs(off + model.vocab().rendering(id).size());
      prefix.pop_back();
      running_prob = saved;
    }
  }
};

}  // namespace

LongestPlausibleResult longest_plausible(const GenerativeModel& model,
                                         const std::string& s,
                                         const SamplingRule& rule,
                                         Temperature temp,
                                         const OracleBudget& budget) {
  LongestSearch search{
      model, s, rule, temp, Meter{budget}, scalars_remaining(s), {}, 1.0, {}};
  search.dfs(0);
  LongestPlausibleResult out;
  out.nodes_explored = search.meter.nodes;
  if (search.best) {
    out.sequence = TokenSequence(model.vocab_ptr(), *search.best);
  }
  return out;
}

namespace {

struct RevenueSearch {
  const std::shared_ptr<const Vocabulary>& vocab;
  const PricingMechanism& mech;
  const std::string& s;
  Meter meter;
  std::vector<std::size_t> rem;
  // Exact price of the remaining suffix for string determined mechanisms,
  // r_o * remaining scalars for per-token: an admissible optimistic bound
  // either way.
  std::vector<double> suffix_bound;

  std::vector<TokenId> prefix;
  double price_so_far = 0.0;
  std::optional<std::vector<TokenId>> best;
  double best_revenue = 0.0;

  double token_price(TokenId id) const {
    if (const auto* pt = std::get_if<PerTokenPricing>(&mech)) return pt->r_o;
    if (const auto* pc = std::get_if<PerCharPricing>(&mech)) {
      return pc->r_c * static_cast<double>(vocab->char_count(id));
    }
    const auto& table = std::get<CharTablePricing>(mech);
    double total = 0.0;
    for (char32_t c : decode_utf8(vocab->rendering(id))) {
      const auto it = table.prices.find(c);
      if (it == table.prices.end()) {
        throw ContractError("char table has no price for '" +
                            encode_utf8(c) + "'");
      }
      total += it->second;
    }
    return total;
  }

  void dfs(std::size_t off) {
    meter.tick();
    if (off == s.size()) {
      if (!best || price_so_far > best_revenue + 1e-9) {
        best = prefix;
        best_revenue = price_so_far;
      }
      return;
    }
    if (best && price_so_far + suffix_bound[off] <= best_revenue + 1e-9) {
      return;
    }
    for (TokenId id : vocab->matches_at(s, off)) {
      const double p = token_price(id);
      price_so_far += p;
      prefix.push_back(id);
      dfs(off + vocab->rendering(id).size());
      prefix.pop_back();
      price_so_far -= p;
    }
  }
};

}  // namespace

MaxRevenueResult max_revenue_tokenization(
    const std::shared_ptr<const Vocabulary>& vocab,
    const PricingMechanism& mech, const std::string& s,
    const OracleBudget& budget) {
  RevenueSearch search{vocab,
                       mech,
                       s,
                       Meter{budget},
                       scalars_remaining(s),
                       {},
                       {},
                       0.0,
                       {},
                       0.0};
  search.suffix_bound.assign(s.size() + 1, 0.0);
  if (const auto* pt = std::get_if<PerTokenPricing>(&mech)) {
    for (std::size_t off = 0; off <= s.size(); ++off) {
      search.suffix_bound[off] =
          pt->r_o * static_cast<double>(search.rem[off]);
    }
  } else if (const auto* pc = std::get_if<PerCharPricing>(&mech)) {
    for (std::size_t off = 0; off <= s.size(); ++off) {
      search.suffix_bound[off] =
          pc->r_c * static_cast<double>(search.rem[off]);
    }
  } else {
    const auto& table = std::get<CharTablePricing>(mech);
    const auto scalars = decode_utf8(s);
    std::size_t off = s.size();
    double acc = 0.0;
    for (std::size_t i = scalars.size(); i-- > 0;) {
      const auto it = table.prices.find(scalars[i]);
      if (it == table.prices.end()) {
        throw ContractError("char table has no price for '" +
                            encode_utf8(scalars[i]) + "'");
      }
      acc += it->second;
      off -= encode_utf8(scalars[i]).size();
      search.suffix_bound[off] = acc;
    }
  }
  search.dfs(0);
  if (!search.best) {
    throw ContractError("string has no tokenization under this vocabulary");
  }
  MaxRevenueResult out{TokenSequence(vocab, *search.best),
                       search.best_revenue, search.meter.nodes};
  return out;
}

bool hamiltonian_path_exists(const DirectedGraph& g,
                             const OracleBudget& budget) {
  const std::uint32_t n = g.node_count();
  if (n > budget.max_graph_nodes || n > 25) {
    throw BudgetError("graph exceeds the Hamiltonian oracle budget (" +
                      std::to_string(n) + " nodes)");
  }
  if (n == 1) return true;
  const std::uint32_t full = (1u << n) - 1;
  // reach[mask] = set of end nodes of paths visiting exactly mask
  std::vector<std::uint32_t> reach(full + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) reach[1u << v] = 1u << v;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    const std::uint32_t ends = reach[mask];
    if (!ends) continue;
    if (mask == full) return true;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (!(ends & (1u << u))) continue;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (mask & (1u << v)) continue;
        if (g.has_edge(u + 1, v + 1)) reach[mask | (1u << v)] |= 1u << v;
      }
    }
  }
  return (reach[full] != 0);
}

}  // namespace toksim
