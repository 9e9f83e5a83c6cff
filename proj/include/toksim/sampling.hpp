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

#ifndef TOKSIM_SAMPLING_HPP_
#define TOKSIM_SAMPLING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "toksim/model.hpp"
#include "toksim/sequence.hpp"

namespace toksim {

// Decoding rules. TopP and TopK restrict each step to an allowed set;
// SequenceThreshold accepts whole sequences by probability mass;
// Unrestricted accepts anything with positive probability.
struct TopP {
  double p;  // in (0, 1]
};
struct TopK {
  std::uint32_t k;  // in [1, |V| - 1], validated against the vocabulary
};
struct SequenceThreshold {
  double eps;  // in (0, 1)
};
struct Unrestricted {};

using SamplingRule = std::variant<TopP, TopK, SequenceThreshold, Unrestricted>;

// Spec strings: "topp:0.95", "topk:4", "thresh:0.01", "unrestricted".
SamplingRule parse_rule(const std::string& text);
std::string format_rule(const SamplingRule& rule);

// Softmax temperature as a power transform of explicit probabilities:
// q_i proportional to p_i^(1/T). T = 1 must leave the vector bit identical,
// so it short circuits the transform entirely.
struct Temperature {
  double value = 1.0;  // > 0
};

// Validated, temperature adjusted next-token distribution. Raises
// ContractError when the model emits a malformed vector.
std::vector<double> next_dist(const GenerativeModel& model,
                              std::span<const TokenId> prefix,
                              Temperature temp);

// The set a per-step rule admits after the given prefix, in descending
// probability order with probability ties broken by ascending token id.
// TopP: smallest prefix of that order reaching cumulative mass >= p, never
// padded with zero probability tokens (so TopP(1.0) is exactly the
// support). TopK: the first k tokens of the same order. SequenceThreshold
// has no per-step set and raises UsageError.
std::vector<TokenId> allowed_set(const GenerativeModel& model,
                                 std::span<const TokenId> prefix,
                                 const SamplingRule& rule, Temperature temp);

// Product of step conditionals along the sequence, including the EOS step
// when the sequence ends with EOS.
double sequence_prob(const GenerativeModel& model, const TokenSequence& seq,
                     Temperature temp);

struct PlausibilityOptions {
  // When false, a trailing EOS terminator is exempt from the check: its
  // step is skipped under TopP/TopK and its factor dropped under
  // SequenceThreshold.
  bool include_eos_step = true;
};

// Whether an auditor applying the rule would accept the sequence as a
// possible sample: every step in its allowed set (TopP/TopK), sequence
// probability >= eps (SequenceThreshold), or positive probability at every
// step (Unrestricted).
bool is_plausible(const GenerativeModel& model, const TokenSequence& seq,
                  const SamplingRule& rule, Temperature temp,
                  const PlausibilityOptions& opts = {});

// Ancestral sampling, renormalized over the allowed set at each step.
// Stops at EOS or after max_len billable tokens. SequenceThreshold and
// Unrestricted sample from the full support; the threshold constrains
// audits, not generation. Deterministic in seed.
TokenSequence sample_output(const GenerativeModel& model,
                            const SamplingRule& rule, Temperature temp,
                            std::size_t max_len, std::uint64_t seed);

}  // namespace toksim

#endif  // TOKSIM_SAMPLING_HPP_
