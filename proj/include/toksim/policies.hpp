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

#ifndef TOKSIM_POLICIES_HPP_
#define TOKSIM_POLICIES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toksim/lattice.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"

namespace toksim {

// How a provider reports the token sequence it generated. Every policy is
// string preserving by construction: the customer always receives the text
// they would have received anyway, only the bill changes.

struct TruthfulPolicy {};

// Applies up to m uniformly random splits, recomputing the valid split set
// on the current sequence each iteration. No plausibility check and no
// verification cost; cheap but detectable.
struct RandomSplitPolicy {
  std::uint32_t m;
  std::uint64_t seed;
};

// Greedy highest-id splitting, then one plausibility check at the end:
// report the candidate if an auditor applying (rule, temp) would accept it,
// otherwise fall back to the true sequence. The check costs c_v either way.
struct HeuristicPolicy {
  std::uint32_t m;
  SamplingRule rule;
  Temperature temp;
};

using ReportingPolicy =
    std::variant<TruthfulPolicy, RandomSplitPolicy, HeuristicPolicy>;

// Spec strings:
//   "truthful"
//   "random:m=3,seed=7"
//   "heuristic:m=3,rule=topp:0.95,T=1.3"
ReportingPolicy parse_policy(const std::string& text);
std::string format_policy(const ReportingPolicy& policy);
// Policy label with the m parameter elided ("random:seed=7"), used to group
// sweep rows that vary m.
std::string policy_family(const ReportingPolicy& policy);

struct SplitEvent {
  std::uint32_t iteration;  // 0 based
  std::size_t pos;
  TokenId original;
  TokenId left;
  TokenId right;
};

struct ReportOutcome {
  explicit ReportOutcome(TokenSequence reported_seq)
      : reported(std::move(reported_seq)) {}

  TokenSequence reported;
  // Effective splits: len(reported) == len(input) + splits_applied for
  // every policy, including a heuristic that fell back to the input.
  std::uint32_t splits_applied = 0;
  // reported differs from the input sequence
  bool modified = false;
  // a plausibility check ran (heuristic only) and this was its verdict
  std::optional<bool> candidate_plausible;
  // the per-output verification cost c_v is due (heuristic only)
  bool verification_charged = false;
  // Trace of the candidate construction. For a heuristic whose candidate
  // was rejected it describes the discarded splits, not the report.
  std::vector<SplitEvent> trace;
};

ReportOutcome apply_truthful(const TokenSequence& seq);

// Iterates m times: recompute valid_splits on the current sequence, stop if
// none, otherwise apply one uniformly at random. Split choices draw from a
// per-iteration stream derived from (seed, iteration), so runs are exactly
// reproducible.
ReportOutcome apply_random_split(const TokenSequence& seq, std::uint32_t m,
                                 std::uint64_t seed);

// Iterates m times: pick the position with the highest token id (ties to
// the lowest position), stop if that token renders a single character or no
// token pair renders it, otherwise replace it with the pair maximizing
// min(left, right), then max(left, right), then the lowest left id. One
// plausibility check at the end decides between candidate and input.
ReportOutcome apply_heuristic(const TokenSequence& seq, std::uint32_t m,
                              const GenerativeModel& model,
                              const SamplingRule& rule, Temperature temp,
                              const PlausibilityOptions& opts = {});

// Dispatcher. model may be null for policies that do not need one; passing
// none to a heuristic policy raises UsageError.
ReportOutcome apply_policy(const ReportingPolicy& policy,
                           const TokenSequence& seq,
                           const GenerativeModel* model,
                           const PlausibilityOptions& opts = {});

}  // namespace toksim

#endif  // TOKSIM_POLICIES_HPP_
