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

#include "toksim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "toksim/errors.hpp"
#include "toksim/money.hpp"
#include "toksim/rng.hpp"

namespace toksim {

namespace {

// Parses "k1=v1,k2=v2,..." where rule values may themselves contain ':'.
std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eq = text.find('=', pos);
    if (eq == std::string::npos) {
      throw UsageError("bad policy parameter list: '" + text + "'");
    }
    const std::string key = text.substr(pos, eq - pos);
    const auto comma = text.find(',', eq + 1);
    const std::string value =
        text.substr(eq + 1, comma == std::string::npos ? std::string::npos
                                                       : comma - eq - 1);
    if (key.empty() || value.empty() || !out.emplace(key, value).second) {
      throw UsageError("bad policy parameter list: '" + text + "'");
    }
    pos = comma == std::string::npos ? text.size() : comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad " + what + ": '" + text + "'");
  }
}

const std::string& require(const std::map<std::string, std::string>& kv,
                           const std::string& key, const std::string& what) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    throw UsageError(what + " policy requires parameter '" + key + "'");
  }
  return it->second;
}

}  // namespace

ReportingPolicy parse_policy(const std::string& text) {
  if (text == "truthful") return TruthfulPolicy{};
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("bad policy spec: '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const auto kv = parse_kv(text.substr(colon + 1));
  if (kind == "random") {
    if (kv.size() != 2) throw UsageError("random policy takes m and seed");
    const std::uint64_t m = parse_u64(require(kv, "m", "random"), "m");
    if (m > UINT32_MAX) throw UsageError("m is too large");
    return RandomSplitPolicy{static_cast<std::uint32_t>(m),
                             parse_u64(require(kv, "seed", "random"), "seed")};
  }
  if (kind == "heuristic") {
    if (kv.size() != 3) {
      throw UsageError("heuristic policy takes m, rule and T");
    }
    const std::uint64_t m = parse_u64(require(kv, "m", "heuristic"), "m");
    if (m > UINT32_MAX) throw UsageError("m is too large");
    const SamplingRule rule = parse_rule(require(kv, "rule", "heuristic"));
    double t = 0.0;
    try {
      const std::string& ts = require(kv, "T", "heuristic");
      std::size_t used = 0;
      t = std::stod(ts, &used);
      if (used != ts.size()) throw std::invalid_argument("trailing");
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception&) {
      throw UsageError("bad temperature in policy spec");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw UsageError("temperature must be positive and finite");
    }
    return HeuristicPolicy{static_cast<std::uint32_t>(m), rule,
                           Temperature{t}};
  }
  throw UsageError("unknown policy kind: '" + kind + "'");
}

std::string format_policy(const ReportingPolicy& policy) {
  if (std::holds_alternative<TruthfulPolicy>(policy)) return "truthful";
  if (const auto* r = std::get_if<RandomSplitPolicy>(&policy)) {
    return "random:m=" + std::to_string(r->m) +
           ",seed=" + std::to_string(r->seed);
  }
  const auto& h = std::get<HeuristicPolicy>(policy);
  return "heuristic:m=" + std::to_string(h.m) + ",rule=" + format_rule(h.rule) +
         ",T=" + format_double(h.temp.value);
}

std::string policy_family(const ReportingPolicy& policy) {
  if (std::holds_alternative<TruthfulPolicy>(policy)) return "truthful";
  if (const auto* r = std::get_if<RandomSplitPolicy>(&policy)) {
    return "random:seed=" + std::to_string(r->seed);
  }
  const auto& h = std::get<HeuristicPolicy>(policy);
  return "heuristic:rule=" + format_rule(h.rule) +
         ",T=" + format_double(h.temp.value);
}

ReportOutcome apply_truthful(const TokenSequence& seq) {
  return ReportOutcome{seq};
}

ReportOutcome apply_random_split(const TokenSequence& seq, std::uint32_t m,
                                 std::uint64_t seed) {
  ReportOutcome out{seq};
  for (std::uint32_t iter = 0; iter < m; ++iter) {
    const auto splits = valid_splits(out.reported);
    if (splits.empty()) break;
    SplitMix64 rng(derive_stream(seed, iter));
    const auto& pick = splits[rng.below(splits.size())];
    out.trace.push_back(SplitEvent{iter, pick.pos,
                                   out.reported.ids()[pick.pos], pick.left,
                                   pick.right});
    out.reported = apply_split(out.reported, pick);
    ++out.splits_applied;
  }
  out.modified = out.splits_applied > 0;
  return out;
}

ReportOutcome apply_heuristic(const TokenSequence& seq, std::uint32_t m,
                              const GenerativeModel& model,
                              const SamplingRule& rule, Temperature temp,
                              const PlausibilityOptions& opts) {
  if (!(seq.vocab() == model.vocab())) {
    throw ContractError("heuristic policy: sequence and model vocabularies "
                        "differ");
  }
  TokenSequence candidate = seq;
  std::vector<SplitEvent> trace;
  std::uint32_t splits = 0;
  for (std::uint32_t iter = 0; iter < m; ++iter) {
    const Vocabulary& vocab = candidate.vocab();
    // argmax id over billable positions, ties to the lowest position
    std::optional<std::size_t> pos;
    for (std::size_t j = 0; j < candidate.ids().size(); ++j) {
      const TokenId id = candidate.ids()[j];
      if (vocab.is_eos(id)) continue;
      if (!pos || id > candidate.ids()[*pos]) pos = j;
    }
    if (!pos) break;
    const TokenId target = candidate.ids()[*pos];
    if (vocab.is_single_char(target)) break;
    // best split pair of the target token: max min id, then max max id,
    // then lowest left id
    const std::string& r = vocab.rendering(target);
    std::optional<SplitTriple> best;
    auto better = [](const SplitTriple& a, const SplitTriple& b) {
      const TokenId amin = std::min(a.left, a.right);
      const TokenId bmin = std::min(b.left, b.right);
      if (amin != bmin) return amin > bmin;
      const TokenId amax = std::max(a.left, a.right);
      const TokenId bmax = std::max(b.left, b.right);
      if (amax != bmax) return amax > bmax;
      return a.left < b.left;
    };
    for (std::size_t cut = 1; cut < r.size(); ++cut) {
      const auto left = vocab.find(r.substr(0, cut));
      if (!left) continue;
      const auto right = vocab.find(r.substr(cut));
      if (!right) continue;
      const SplitTriple triple{*pos, *left, *right};
      if (!best || better(triple, *best)) best = triple;
    }
    if (!best) break;  // multi-character token with no rendering pair
    trace.push_back(SplitEvent{iter, best->pos, target, best->left,
                               best->right});
    candidate = apply_split(candidate, *best);
    ++splits;
  }
  // One verification at the end, charged to the provider no matter what.
  const bool plausible = is_plausible(model, candidate, rule, temp, opts);
  ReportOutcome out{plausible ? candidate : seq};
  out.splits_applied = plausible ? splits : 0;
  out.modified = plausible && splits > 0;
  out.candidate_plausible = plausible;
  out.verification_charged = true;
  out.trace = std::move(trace);  // candidate construction, kept either way
  return out;
}

ReportOutcome apply_policy(const ReportingPolicy& policy,
                           const TokenSequence& seq,
                           const GenerativeModel* model,
                           const PlausibilityOptions& opts) {
  if (std::holds_alternative<TruthfulPolicy>(policy)) {
    return apply_truthful(seq);
  }
  if (const auto* r = std::get_if<RandomSplitPolicy>(&policy)) {
    return apply_random_split(seq, r->m, r->seed);
  }
  const auto& h = std::get<HeuristicPolicy>(policy);
  if (model == nullptr) {
    throw UsageError("heuristic policy requires a generative model");
  }
  return apply_heuristic(seq, h.m, *model, h.rule, h.temp, opts);
}

}  // namespace toksim
