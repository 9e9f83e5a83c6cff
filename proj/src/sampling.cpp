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

#include "toksim/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "toksim/errors.hpp"
#include "toksim/money.hpp"
#include "toksim/rng.hpp"

namespace toksim {

namespace {

double parse_decimal(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + ": '" + text + "'");
  }
}

// Token ids sorted by descending probability, ties ascending id.
std::vector<TokenId> rank_by_prob(const std::vector<double>& dist) {
  std::vector<TokenId> order(dist.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return a < b;
  });
  return order;
}

}  // namespace

SamplingRule parse_rule(const std::string& text) {
  if (text == "unrestricted") return Unrestricted{};
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("bad sampling rule: '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "topp") {
    const double p = parse_decimal(arg, "top-p value");
    if (!(p > 0.0) || p > 1.0) {
      throw UsageError("top-p value must be in (0, 1]");
    }
    return TopP{p};
  }
  if (kind == "topk") {
    const double kv = parse_decimal(arg, "top-k value");
    if (kv < 1.0 || kv != std::floor(kv) || kv > UINT32_MAX) {
      throw UsageError("top-k value must be a positive integer");
    }
    return TopK{static_cast<std::uint32_t>(kv)};
  }
  if (kind == "thresh") {
    const double eps = parse_decimal(arg, "threshold value");
    if (!(eps > 0.0) || !(eps < 1.0)) {
      throw UsageError("threshold value must be in (0, 1)");
    }
    return SequenceThreshold{eps};
  }
  throw UsageError("unknown sampling rule kind: '" + kind + "'");
}

std::string format_rule(const SamplingRule& rule) {
  if (const auto* p = std::get_if<TopP>(&rule)) {
    return "topp:" + format_double(p->p);
  }
  if (const auto* k = std::get_if<TopK>(&rule)) {
    return "topk:" + std::to_string(k->k);
  }
  if (const auto* t = std::get_if<SequenceThreshold>(&rule)) {
    return "thresh:" + format_double(t->eps);
  }
  return "unrestricted";
}

std::vector<double> next_dist(const GenerativeModel& model,
                              std::span<const TokenId> prefix,
                              Temperature temp) {
  if (!(temp.value > 0.0) || !std::isfinite(temp.value)) {
    throw UsageError("temperature must be positive and finite");
  }
  std::vector<double> dist = model.next_dist_raw(prefix);
  if (dist.size() != model.vocab().size()) {
    throw ContractError("model returned a vector of wrong size");
  }
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ContractError("model returned a negative or non-finite "
                          "probability");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ContractError("model distribution sums to " + std::to_string(sum));
  }
  // T = 1 answers are contractually bit identical to the raw model output.
  if (temp.value == 1.0) return dist;
  const double inv = 1.0 / temp.value;
  double total = 0.0;
  for (double& p : dist) {
    p = p > 0.0 ? std::pow(p, inv) : 0.0;
    total += p;
  }
  if (!(total > 0.0)) {
    throw ContractError("temperature transform annihilated the distribution");
  }
  for (double& p : dist) p /= total;
  return dist;
}

std::vector<TokenId> allowed_set(const GenerativeModel& model,
                                 std::span<const TokenId> prefix,
                                 const SamplingRule& rule, Temperature temp) {
  if (std::holds_alternative<SequenceThreshold>(rule)) {
    throw UsageError("sequence threshold rules have no per-step allowed set");
  }
  if (std::holds_alternative<Unrestricted>(rule)) {
    // Support of the distribution, descending probability for consistency.
    const auto dist = next_dist(model, prefix, temp);
    std::vector<TokenId> out;
    for (TokenId id : rank_by_prob(dist)) {
      if (dist[id] > 0.0) out.push_back(id);
    }
    return out;
  }
  const auto dist = next_dist(model, prefix, temp);
  const auto order = rank_by_prob(dist);
  std::vector<TokenId> out;
  if (const auto* tp = std::get_if<TopP>(&rule)) {
    double cum = 0.0;
    for (TokenId id : order) {
      if (cum >= tp->p) break;
      if (dist[id] <= 0.0) break;  // only FP dust left; stop at the support
      out.push_back(id);
      cum += dist[id];
    }
    return out;
  }
  const auto* tk = std::get_if<TopK>(&rule);
  if (tk->k < 1 || tk->k >= model.vocab().size()) {
    throw UsageError("top-k k must be in [1, |V| - 1]");
  }
  out.assign(order.begin(), order.begin() + tk->k);
  return out;
}

double sequence_prob(const GenerativeModel& model, const TokenSequence& seq,
                     Temperature temp) {
  double prob = 1.0;
  const auto& ids = seq.ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto prefix = std::span<const TokenId>(ids.data(), i);
    prob *= next_dist(model, prefix, temp)[ids[i]];
  }
  return prob;
}

bool is_plausible(const GenerativeModel& model, const TokenSequence& seq,
                  const SamplingRule& rule, Temperature temp,
                  const PlausibilityOptions& opts) {
  const auto& ids = seq.ids();
  const bool skip_last_eos = !opts.include_eos_step && seq.ends_with_eos();
  const std::size_t steps = ids.size() - (skip_last_eos ? 1 : 0);

  if (const auto* th = std::get_if<SequenceThreshold>(&rule)) {
    double prob = 1.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const auto prefix = std::span<const TokenId>(ids.data(), i);
      prob *= next_dist(model, prefix, temp)[ids[i]];
    }
    return prob >= th->eps;
  }
  if (std::holds_alternative<Unrestricted>(rule)) {
    // Positive sequence probability, checked per step to dodge underflow.
    for (std::size_t i = 0; i < steps; ++i) {
      const auto prefix = std::span<const TokenId>(ids.data(), i);
      if (!(next_dist(model, prefix, temp)[ids[i]] > 0.0)) return false;
    }
    return true;
  }
  for (std::size_t i = 0; i < steps; ++i) {
    const auto prefix = std::span<const TokenId>(ids.data(), i);
    const auto allowed = allowed_set(model, prefix, rule, temp);
    if (std::find(allowed.begin(), allowed.end(), ids[i]) == allowed.end()) {
      return false;
    }
  }
  return true;
}

TokenSequence sample_output(const GenerativeModel& model,
                            const SamplingRule& rule, Temperature temp,
                            std::size_t max_len, std::uint64_t seed) {
  const bool per_step_rule = std::holds_alternative<TopP>(rule) ||
                             std::holds_alternative<TopK>(rule);
  SplitMix64 rng(seed);
  std::vector<TokenId> ids;
  std::size_t billable = 0;
  while (billable < max_len) {
    const auto prefix = std::span<const TokenId>(ids.data(), ids.size());
    const auto dist = next_dist(model, prefix, temp);
    std::vector<TokenId> pool;
    if (per_step_rule) {
      pool = allowed_set(model, prefix, rule, temp);
    } else {
      for (TokenId id = 0; id < dist.size(); ++id) {
        if (dist[id] > 0.0) pool.push_back(id);
      }
    }
    double total = 0.0;
    for (TokenId id : pool) total += dist[id];
    if (pool.empty() || !(total > 0.0)) {
      throw ContractError("sampling pool is empty");
    }
    const double u = rng.uniform01() * total;
    double cum = 0.0;
    TokenId picked = pool.back();
    for (TokenId id : pool) {
      cum += dist[id];
      if (u < cum) {
        picked = id;
        break;
      }
    }
    ids.push_back(picked);
    if (model.vocab().is_eos(picked)) break;
    ++billable;
  }
  return TokenSequence(model.vocab_ptr(), std::move(ids));
}

}  // namespace toksim
