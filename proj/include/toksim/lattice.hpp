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

#ifndef TOKSIM_LATTICE_HPP_
#define TOKSIM_LATTICE_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "toksim/sequence.hpp"
#include "toksim/vocab.hpp"

namespace toksim {

// The tokenization lattice of a string: nodes are byte offsets, edges are
// tokens matching at an offset, paths from 0 to the end are exactly the
// tokenizations. EOS never participates (it renders nothing, so it would
// be a self loop everywhere).

// One way of splitting the token at position pos into a pair of tokens
// whose renderings concatenate to the original rendering.
struct SplitTriple {
  std::size_t pos;
  TokenId left;
  TokenId right;

  bool operator==(const SplitTriple& o) const {
    return pos == o.pos && left == o.left && right == o.right;
  }
};

// All split triples of the sequence, ordered by (pos, left, right). EOS
// positions are skipped. Empty result means the sequence is a fixed point
// of splitting, which for alphabet closed vocabularies happens exactly when
// every billable token renders a single character.
std::vector<SplitTriple> valid_splits(const TokenSequence& seq);

// Applies one split. Validates the triple against the sequence; the result
// renders identically and is one token longer.
TokenSequence apply_split(const TokenSequence& seq, const SplitTriple& split);

// True when no split applies, i.e. all billable tokens are single character.
bool is_single_char_fixed_point(const TokenSequence& seq);

// Depth first enumeration of every tokenization of s, offset major with
// ascending token ids, which makes the emission order lexicographic in id
// sequences. The visitor returns false to stop early. Strings containing
// characters outside the alphabet simply have zero tokenizations.
void enumerate_tokenizations(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s,
    const std::function<bool(const std::vector<TokenId>&)>& visit);

// Convenience wrapper collecting at most limit tokenizations.
std::vector<TokenSequence> all_tokenizations(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s,
    std::size_t limit = SIZE_MAX);

// Counts tokenizations by dynamic programming over the lattice without
// enumerating them. Overflow past uint64 raises ContractError.
std::uint64_t count_tokenizations(const Vocabulary& vocab,
                                  const std::string& s);

// Longest match tokenization: at each offset take the longest matching
// token (unique since renderings are unique). Never dead-ends thanks to
// alphabet closure. Characters outside the alphabet raise ContractError.
TokenSequence greedy_tokenize(const std::shared_ptr<const Vocabulary>& vocab,
                              const std::string& s);

// The unique tokenization into single character tokens.
TokenSequence single_char_tokenize(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s);

}  // namespace toksim

#endif  // TOKSIM_LATTICE_HPP_
