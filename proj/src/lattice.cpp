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

#include "toksim/lattice.hpp"

#include <algorithm>

#include "toksim/errors.hpp"
#include "toksim/text.hpp"

namespace toksim {

std::vector<SplitTriple> valid_splits(const TokenSequence& seq) {
  const Vocabulary& vocab = seq.vocab();
  std::vector<SplitTriple> out;
  for (std::size_t pos = 0; pos < seq.ids().size(); ++pos) {
    const TokenId id = seq.ids()[pos];
    if (vocab.is_eos(id)) continue;
    const std::string& r = vocab.rendering(id);
    // Candidate byte cut points are proper prefixes that are tokens; the
    // suffix must be a token too. Renderings are valid UTF-8, so byte cuts
    // that land inside a scalar never match any token.
    for (std::size_t cut = 1; cut < r.size(); ++cut) {
      const auto left = vocab.find(r.substr(0, cut));
      if (!left) continue;
      const auto right = vocab.find(r.substr(cut));
      if (!right) continue;
      out.push_back(SplitTriple{pos, *left, *right});
    }
  }
  std::sort(out.begin(), out.end(), [](const SplitTriple& a,
                                       const SplitTriple& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    if (a.left != b.left) return a.left < b.left;
    return a.right < b.right;
  });
  return out;
}

TokenSequence apply_split(const TokenSequence& seq, const SplitTriple& split) {
  const Vocabulary& vocab = seq.vocab();
  if (split.pos >= seq.ids().size()) {
    throw ContractError("split position out of range");
  }
  const TokenId id = seq.ids()[split.pos];
  if (vocab.is_eos(id)) throw ContractError("cannot split eos");
  if (vocab.rendering(split.left) + vocab.rendering(split.right) !=
      vocab.rendering(id)) {
    throw ContractError("split pair does not render the original token");
  }
  std::vector<TokenId> ids = seq.ids();
  ids[split.pos] = split.left;
  ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(split.pos) + 1,
             split.right);
  return TokenSequence(seq.vocab_ptr(), std::move(ids));
}

bool is_single_char_fixed_point(const TokenSequence& seq) {
  const Vocabulary& vocab = seq.vocab();
  for (TokenId id : seq.ids()) {
    if (vocab.is_eos(id)) continue;
    if (!vocab.is_single_char(id)) return false;
  }
  return true;
}

namespace {

bool enumerate_rec(const std::shared_ptr<const Vocabulary>& vocab,
                   const std::string& s, std::size_t off,
                   std::vector<TokenId>& prefix,
                   const std::function<bool(const std::vector<TokenId>&)>&
                       visit) {
  if (off == s.size()) return visit(prefix);
  for (TokenId id : vocab->matches_at(s, off)) {
    prefix.push_back(id);
    const bool keep_going = enumerate_rec(
        vocab, s, off + vocab->rendering(id).size(), prefix, visit);
    prefix.pop_back();
    if (!keep_going) return false;
  }
  return true;
}

}  // namespace

void enumerate_tokenizations(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s,
    const std::function<bool(const std::vector<TokenId>&)>& visit) {
  std::vector<TokenId> prefix;
  enumerate_rec(vocab, s, 0, prefix, visit);
}

std::vector<TokenSequence> all_tokenizations(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s,
    std::size_t limit) {
  std::vector<TokenSequence> out;
  enumerate_tokenizations(vocab, s, [&](const std::vector<TokenId>& ids) {
    out.emplace_back(vocab, ids);
    return out.size() < limit;
  });
  return out;
}

std::uint64_t count_tokenizations(const Vocabulary& vocab,
                                  const std::string& s) {
  // ways[off] = number of tokenizations of the suffix starting at off.
  std::vector<std::uint64_t> ways(s.size() + 1, 0);
  ways[s.size()] = 1;
  for (std::size_t off = s.size(); off-- > 0;) {
    std::uint64_t total = 0;
    for (TokenId id : vocab.matches_at(s, off)) {
      const std::uint64_t next = ways[off + vocab.rendering(id).size()];
      if (__builtin_add_overflow(total, next, &total)) {
        throw ContractError("tokenization count overflows uint64");
      }
    }
    ways[off] = total;
  }
  return ways[0];
}

TokenSequence greedy_tokenize(const std::shared_ptr<const Vocabulary>& vocab,
                              const std::string& s) {
  std::vector<TokenId> ids;
  std::size_t off = 0;
  while (off < s.size()) {
    const auto matches = vocab->matches_at(s, off);
    if (matches.empty()) {
      throw ContractError("string is not tokenizable at byte " +
                          std::to_string(off));
    }
    TokenId best = matches[0];
    for (TokenId id : matches) {
      if (vocab->rendering(id).size() > vocab->rendering(best).size()) {
        best = id;
      }
    }
    ids.push_back(best);
    off += vocab->rendering(best).size();
  }
  return TokenSequence(vocab, std::move(ids));
}

TokenSequence single_char_tokenize(
    const std::shared_ptr<const Vocabulary>& vocab, const std::string& s) {
  std::vector<TokenId> ids;
  for (char32_t c : decode_utf8(s)) {
    if (!vocab->in_alphabet(c)) {
      throw ContractError("character outside the alphabet: " + encode_utf8(c));
    }
    ids.push_back(vocab->single_char_token(c));
  }
  return TokenSequence(vocab, std::move(ids));
}

}  // namespace toksim
