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

#include "toksim/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toksim/errors.hpp"
#include "toksim/text.hpp"

namespace toksim {

Vocabulary::Vocabulary(const std::vector<std::string>& alphabet,
                       const std::vector<std::string>& tokens, bool with_eos) {
  if (alphabet.empty()) throw ContractError("vocabulary: empty alphabet");
  std::set<char32_t> alpha;
  for (const auto& a : alphabet) {
    const auto scalars = decode_utf8(a);
    if (scalars.size() != 1) {
      throw ContractError("vocabulary: alphabet entry '" + a +
                          "' is not a single character");
    }
    if (!alpha.insert(scalars[0]).second) {
      throw ContractError("vocabulary: duplicate alphabet character '" + a +
                          "'");
    }
  }
  alphabet_.assign(alpha.begin(), alpha.end());

  renderings_ = tokens;
  if (with_eos) {
    renderings_.emplace_back();
    eos_ = static_cast<TokenId>(renderings_.size() - 1);
  }
  if (renderings_.empty()) throw ContractError("vocabulary: no tokens");
  if (renderings_.size() > static_cast<std::size_t>(UINT32_MAX)) {
    throw ContractError("vocabulary: too many tokens");
  }

  char_counts_.resize(renderings_.size());
  for (TokenId id = 0; id < renderings_.size(); ++id) {
    const std::string& r = renderings_[id];
    if (is_eos(id)) {
      char_counts_[id] = 0;
      continue;
    }
    if (r.empty()) {
      throw ContractError("vocabulary: token " + std::to_string(id) +
                          " renders to the empty string");
    }
    const auto scalars = decode_utf8(r);
    char_counts_[id] = scalars.size();
    for (char32_t c : scalars) {
      if (!alpha.count(c)) {
        throw ContractError("vocabulary: token '" + r +
                            "' uses a character outside the alphabet");
      }
    }
    if (!by_rendering_.emplace(r, id).second) {
      throw ContractError("vocabulary: duplicate token rendering '" + r + "'");
    }
    if (scalars.size() == 1) single_char_.emplace(scalars[0], id);
  }

  // Alphabet closure: every character must be reachable as its own token,
  // otherwise some strings over the alphabet have no tokenization at all.
  for (char32_t c : alphabet_) {
    if (!single_char_.count(c)) {
      throw ContractError("vocabulary: alphabet character '" + encode_utf8(c) +
                          "' has no single-character token");
    }
  }
}

TokenId Vocabulary::eos_id() const {
  if (!eos_) throw ContractError("vocabulary has no eos token");
  return *eos_;
}

const std::string& Vocabulary::rendering(TokenId id) const {
  if (id >= renderings_.size()) {
    throw ContractError("unknown token id " + std::to_string(id));
  }
  return renderings_[id];
}

std::size_t Vocabulary::char_count(TokenId id) const {
  if (id >= char_counts_.size()) {
    throw ContractError("unknown token id " + std::to_string(id));
  }
  return char_counts_[id];
}

std::optional<TokenId> Vocabulary::find(const std::string& rendering) const {
  auto it = by_rendering_.find(rendering);
  if (it == by_rendering_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::single_char_token(char32_t c) const {
  auto it = single_char_.find(c);
  if (it == single_char_.end()) {
    throw ContractError("no single-character token for '" + encode_utf8(c) +
                        "'");
  }
  return it->second;
}

bool Vocabulary::in_alphabet(char32_t c) const {
  return std::binary_search(alphabet_.begin(), alphabet_.end(), c);
}

std::vector<TokenId> Vocabulary::matches_at(const std::string& s,
                                            std::size_t off) const {
  std::vector<TokenId> out;
  for (TokenId id = 0; id < renderings_.size(); ++id) {
    if (is_eos(id)) continue;
    const std::string& r = renderings_[id];
    if (r.size() <= s.size() - off && s.compare(off, r.size(), r) == 0) {
      out.push_back(id);
    }
  }
  return out;
}

std::shared_ptr<const Vocabulary> Vocabulary::from_json_text(
    const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("vocabulary json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("tokens")) {
    throw UsageError("vocabulary json: expected object with alphabet/tokens");
  }
  std::vector<std::string> alphabet, tokens;
  try {
    alphabet = j.at("alphabet").get<std::vector<std::string>>();
    tokens = j.at("tokens").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("vocabulary json: ") + e.what());
  }
  bool eos = j.value("eos", false);
  return std::make_shared<const Vocabulary>(alphabet, tokens, eos);
}

std::shared_ptr<const Vocabulary> Vocabulary::from_file(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open vocabulary file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string Vocabulary::to_json_text() const {
  nlohmann::ordered_json j;
  j["alphabet"] = nlohmann::json::array();
  for (char32_t c : alphabet_) j["alphabet"].push_back(encode_utf8(c));
  j["tokens"] = nlohmann::json::array();
  for (TokenId id = 0; id < renderings_.size(); ++id) {
    if (!is_eos(id)) j["tokens"].push_back(renderings_[id]);
  }
  j["eos"] = has_eos();
  return j.dump(2) + "\n";
}

}  // namespace toksim
