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

#ifndef TOKSIM_TESTS_SUPPORT_HPP_
#define TOKSIM_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "toksim/model.hpp"
#include "toksim/rng.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"
#include "toksim/vocab.hpp"

// TOKSIM_DATA_DIR is injected by the build; it points at the repo's data/
// directory with the demo fixtures.
#ifndef TOKSIM_DATA_DIR
#error "TOKSIM_DATA_DIR must be defined by the build"
#endif

namespace toksim::testing {

inline std::string data_path(const std::string& name) {
  return std::string(TOKSIM_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Unique temporary directory, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag) {
    const auto base = std::filesystem::temp_directory_path();
    for (std::uint64_t i = 0;; ++i) {
      path_ = base / ("toksim_" + tag + "_" + std::to_string(i));
      if (std::filesystem::create_directory(path_)) break;
    }
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

// The reference vocabulary used throughout the worked examples: two letters,
// three multi-character tokens, EOS.
inline std::shared_ptr<const Vocabulary> vab() {
  return std::make_shared<Vocabulary>(
      std::vector<std::string>{"a", "b"},
      std::vector<std::string>{"a", "b", "aa", "ab", "aab"}, true);
}

inline TokenSequence seq(std::shared_ptr<const Vocabulary> vocab,
                         std::vector<TokenId> ids) {
  return TokenSequence(std::move(vocab), std::move(ids));
}

// Strictly positive random probability vector (normalized exponentials).
inline std::vector<double> random_dist(SplitMix64& rng, std::size_t n) {
  std::vector<double> d(n);
  double total = 0.0;
  for (double& x : d) {
    // clamp away from 0 so log() stays finite and every token has support
    const double u = std::max(rng.uniform01(), 1e-12);
    x = -std::log(u);
    total += x;
  }
  for (double& x : d) x /= total;
  return d;
}

// Random vocabulary over a 1..3 letter alphabet drawn from {a,b,c}: all
// single characters (the closure invariant demands them) plus up to
// max_multi distinct multi-character tokens of length 2..4, plus EOS.
inline std::shared_ptr<const Vocabulary> random_vocab(
    SplitMix64& rng, std::size_t max_multi = 6) {
  const std::size_t n_alpha = 1 + rng.below(3);
  std::vector<std::string> alphabet;
  for (std::size_t i = 0; i < n_alpha; ++i)
    alphabet.push_back(std::string(1, static_cast<char>('a' + i)));

  std::vector<std::string> tokens = alphabet;
  std::set<std::string> seen(tokens.begin(), tokens.end());
  const std::size_t n_multi = rng.below(max_multi + 1);
  for (std::size_t i = 0; i < n_multi; ++i) {
    const std::size_t len = 2 + rng.below(3);
    std::string t;
    for (std::size_t j = 0; j < len; ++j)
      t += alphabet[rng.below(alphabet.size())];
    if (seen.insert(t).second) tokens.push_back(t);
  }
  return std::make_shared<Vocabulary>(alphabet, tokens, true);
}

// Random string over the vocabulary's alphabet.
inline std::string random_string(SplitMix64& rng, const Vocabulary& vocab,
                                 std::size_t max_len) {
  const std::size_t len = rng.below(max_len + 1);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    const char32_t c = vocab.alphabet()[rng.below(vocab.alphabet().size())];
    s += static_cast<char>(c);  // test alphabets are ASCII
  }
  return s;
}

// Table model with a random default distribution and a few random
// short-prefix overrides. Strictly positive everywhere.
inline std::shared_ptr<const TableModel> random_table_model(
    std::shared_ptr<const Vocabulary> vocab, SplitMix64& rng,
    std::size_t n_entries = 4) {
  std::map<std::vector<TokenId>, std::vector<double>> entries;
  const std::size_t non_eos = vocab->size() - (vocab->has_eos() ? 1 : 0);
  for (std::size_t i = 0; i < n_entries; ++i) {
    std::vector<TokenId> prefix;
    const std::size_t plen = rng.below(3);
    for (std::size_t j = 0; j < plen; ++j)
      prefix.push_back(static_cast<TokenId>(rng.below(non_eos)));
    entries[prefix] = random_dist(rng, vocab->size());
  }
  return std::make_shared<const TableModel>(vocab, std::move(entries),
                                            random_dist(rng, vocab->size()));
}

// Random per-step rule (threshold rules are excluded: they have no per-step
// allowed set, which several properties under test require).
inline SamplingRule random_step_rule(SplitMix64& rng, const Vocabulary& vocab) {
  if (rng.below(2) == 0) {
    return TopP{0.3 + 0.7 * rng.uniform01()};
  }
  return TopK{static_cast<std::uint32_t>(1 + rng.below(vocab.size() - 1))};
}

}  // namespace toksim::testing

#endif  // TOKSIM_TESTS_SUPPORT_HPP_
