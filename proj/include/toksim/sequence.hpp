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

#ifndef TOKSIM_SEQUENCE_HPP_
#define TOKSIM_SEQUENCE_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "toksim/vocab.hpp"

namespace toksim {

// A token sequence bound to its vocabulary. Plain value type: copy it,
// move it, compare it. Construction validates that every id exists and
// that an EOS token, if present, is the final element and appears once.
//
// Conventions used consistently across the project:
//  - len() counts billable tokens, i.e. excludes a trailing EOS
//  - render() concatenates renderings; EOS contributes nothing
//  - char_count() counts Unicode scalars of render()
class TokenSequence {
 public:
  TokenSequence(std::shared_ptr<const Vocabulary> vocab,
                std::vector<TokenId> ids);

  const std::vector<TokenId>& ids() const { return ids_; }
  const Vocabulary& vocab() const { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocab_ptr() const { return vocab_; }

  bool ends_with_eos() const {
    return !ids_.empty() && vocab_->is_eos(ids_.back());
  }

  // Billable token count; the EOS terminator is free.
  std::size_t len() const { return ids_.size() - (ends_with_eos() ? 1 : 0); }

  bool empty() const { return ids_.empty(); }

  std::string render() const;
  std::size_t char_count() const;
  std::size_t count_char(char32_t c) const;

  // Space separated ids, e.g. "4 1 5".
  std::string ids_string() const;

  bool operator==(const TokenSequence& other) const {
    return ids_ == other.ids_ && *vocab_ == *other.vocab_;
  }
  bool operator!=(const TokenSequence& other) const {
    return !(*this == other);
  }

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::vector<TokenId> ids_;
};

}  // namespace toksim

#endif  // TOKSIM_SEQUENCE_HPP_
