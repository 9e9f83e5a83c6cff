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

#ifndef TOKSIM_MODEL_HPP_
#define TOKSIM_MODEL_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "toksim/vocab.hpp"

namespace toksim {

// Autoregressive distribution over token ids. next_dist_raw must return a
// probability vector over every id of the vocabulary (EOS included when the
// vocabulary has one) for any prefix: non negative entries summing to one
// within 1e-9. Callers go through sampling.hpp's next_dist, which validates
// the contract and applies temperature.
//
// Implementations are immutable after construction and safe to query from
// multiple threads concurrently.
class GenerativeModel {
 public:
  virtual ~GenerativeModel() = default;

  virtual const Vocabulary& vocab() const = 0;
  virtual const std::shared_ptr<const Vocabulary>& vocab_ptr() const = 0;

  virtual std::vector<double> next_dist_raw(
      std::span<const TokenId> prefix) const = 0;
};

// Explicit lookup table: exact distributions for listed prefixes, one
// default for everything else. Handy for worked examples and adversarial
// test fixtures.
//
// File format:
//   {"entries": [{"prefix": [0, 2], "dist": [0.5, ...]}, ...],
//    "default": [0.25, ...]}
class TableModel : public GenerativeModel {
 public:
  TableModel(std::shared_ptr<const Vocabulary> vocab,
             std::map<std::vector<TokenId>, std::vector<double>> entries,
             std::vector<double> default_dist);

  static std::shared_ptr<const TableModel> from_file(
      std::shared_ptr<const Vocabulary> vocab, const std::string& path);
  static std::shared_ptr<const TableModel> from_json_text(
      std::shared_ptr<const Vocabulary> vocab, const std::string& text);

  const Vocabulary& vocab() const override { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocab_ptr() const override {
    return vocab_;
  }
  std::vector<double> next_dist_raw(
      std::span<const TokenId> prefix) const override;

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  std::map<std::vector<TokenId>, std::vector<double>> entries_;
  std::vector<double> default_dist_;
};

// Order-n model with additive smoothing:
//   P(t | ctx) = (count(ctx, t) + alpha) / (total(ctx) + alpha * |V|)
// where ctx is the last min(n-1, len(prefix)) tokens. Training counts every
// position of every record under the same truncated-context convention, and
// counts an EOS target at each record end when the vocabulary has EOS.
//
// Corpus file: one record per line, whitespace separated token ids. A
// trailing EOS id on a line is accepted and stripped (the terminator is
// implied).
class NgramModel : public GenerativeModel {
 public:
  NgramModel(std::shared_ptr<const Vocabulary> vocab,
             const std::vector<std::vector<TokenId>>& records,
             std::uint32_t order, double alpha);

  static std::shared_ptr<const NgramModel> from_corpus_file(
      std::shared_ptr<const Vocabulary> vocab, const std::string& path,
      std::uint32_t order, double alpha);

  const Vocabulary& vocab() const override { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocab_ptr() const override {
    return vocab_;
  }
  std::vector<double> next_dist_raw(
      std::span<const TokenId> prefix) const override;

  std::uint32_t order() const { return order_; }
  double alpha() const { return alpha_; }

 private:
  struct ContextCounts {
    std::unordered_map<TokenId, std::uint64_t> per_token;
    std::uint64_t total = 0;
  };

  static std::string pack_context(std::span<const TokenId> ctx);

  std::shared_ptr<const Vocabulary> vocab_;
  std::uint32_t order_;
  double alpha_;
  std::unordered_map<std::string, ContextCounts> counts_;
};

// Parses one corpus line ("4 1 0") into ids; used by NgramModel loading and
// by the CLI.
std::vector<TokenId> parse_id_list(const std::string& line);

}  // namespace toksim

#endif  // TOKSIM_MODEL_HPP_
