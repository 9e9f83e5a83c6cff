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

#ifndef TOKSIM_VOCAB_HPP_
#define TOKSIM_VOCAB_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace toksim {

using TokenId = std::uint32_t;

// Immutable token vocabulary over a finite alphabet of Unicode scalars.
//
// Invariants enforced at construction:
//  - the alphabet is non empty and duplicate free
//  - every non EOS token renders to a non empty string over the alphabet
//  - renderings are unique
//  - every single character of the alphabet is itself a token (alphabet
//    closure; anything else cannot tokenize arbitrary strings and is
//    rejected outright)
//  - at most one EOS token; it renders to the empty string and always takes
//    the largest id
//
// Token ids are the positions in the token list. Instances are immutable
// after construction and safe to share across threads; pass them around as
// shared_ptr<const Vocabulary>.
class Vocabulary {
 public:
  // tokens must not contain the empty string; EOS is appended internally
  // when with_eos is set.
  Vocabulary(const std::vector<std::string>& alphabet,
             const std::vector<std::string>& tokens, bool with_eos);

  // File format: {"alphabet": ["a","b"], "tokens": ["a","b","aa"], "eos": true}
  static std::shared_ptr<const Vocabulary> from_file(const std::string& path);
  static std::shared_ptr<const Vocabulary> from_json_text(
      const std::string& text);
  std::string to_json_text() const;

  std::size_t size() const { return renderings_.size(); }
  bool has_eos() const { return eos_.has_value(); }
  TokenId eos_id() const;

  bool is_eos(TokenId id) const { return eos_ && *eos_ == id; }

  // Rendering of a token; EOS renders "". Unknown ids raise ContractError.
  const std::string& rendering(TokenId id) const;

  // Unicode scalar count of the rendering (0 for EOS).
  std::size_t char_count(TokenId id) const;

  bool is_single_char(TokenId id) const { return char_count(id) == 1; }

  std::optional<TokenId> find(const std::string& rendering) const;

  // The token rendering exactly this single scalar. Exists for every
  // alphabet character by the closure invariant.
  TokenId single_char_token(char32_t c) const;

  const std::vector<char32_t>& alphabet() const { return alphabet_; }
  bool in_alphabet(char32_t c) const;

  // Non EOS tokens whose rendering matches s at byte offset off, ascending
  // id order. The workhorse of lattice traversals.
  std::vector<TokenId> matches_at(const std::string& s, std::size_t off) const;

  bool operator==(const Vocabulary& other) const {
    return renderings_ == other.renderings_ && eos_ == other.eos_ &&
           alphabet_ == other.alphabet_;
  }

 private:
  std::vector<std::string> renderings_;
  std::vector<std::size_t> char_counts_;
  std::optional<TokenId> eos_;
  std::vector<char32_t> alphabet_;  // sorted
  std::unordered_map<std::string, TokenId> by_rendering_;
  std::unordered_map<char32_t, TokenId> single_char_;
};

}  // namespace toksim

#endif  // TOKSIM_VOCAB_HPP_
