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

#include "toksim/sequence.hpp"

#include <sstream>

#include "toksim/errors.hpp"
#include "toksim/text.hpp"

namespace toksim {

TokenSequence::TokenSequence(std::shared_ptr<const Vocabulary> vocab,
                             std::vector<TokenId> ids)
    : vocab_(std::move(vocab)), ids_(std::move(ids)) {
  if (!vocab_) throw ContractError("token sequence without vocabulary");
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] >= vocab_->size()) {
      throw ContractError("invalid sequence: unknown token id " +
                          std::to_string(ids_[i]));
    }
    if (vocab_->is_eos(ids_[i]) && i + 1 != ids_.size()) {
      throw ContractError("invalid sequence: eos before final position");
    }
  }
}

std::string TokenSequence::render() const {
  std::string out;
  for (TokenId id : ids_) out += vocab_->rendering(id);
  return out;
}

std::size_t TokenSequence::char_count() const {
  std::size_t n = 0;
  for (TokenId id : ids_) n += vocab_->char_count(id);
  return n;
}

std::size_t TokenSequence::count_char(char32_t c) const {
  std::size_t n = 0;
  for (TokenId id : ids_) {
    if (vocab_->is_eos(id)) continue;
    for (char32_t x : decode_utf8(vocab_->rendering(id))) {
      if (x == c) ++n;
    }
  }
  return n;
}

std::string TokenSequence::ids_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (i) out << ' ';
    out << ids_[i];
  }
  return out.str();
}

}  // namespace toksim
