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

#include "toksim/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toksim/errors.hpp"

namespace toksim {

namespace {

// Load-time validation of an explicit probability vector.
void validate_dist(const std::vector<double>& dist, std::size_t vocab_size,
                   const std::string& what) {
  if (dist.size() != vocab_size) {
    throw ContractError(what + ": expected " + std::to_string(vocab_size) +
                        " probabilities, got " + std::to_string(dist.size()));
  }
  double sum = 0.0;
  for (double p : dist) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ContractError(what + ": negative or non-finite probability");
    }
    sum += p;
  }
  if (std::fabs(sum - 1.0) > 1e-9) {
    throw ContractError(what + ": probabilities sum to " +
                        std::to_string(sum) + ", not 1");
  }
}

}  // namespace

TableModel::TableModel(
    std::shared_ptr<const Vocabulary> vocab,
    std::map<std::vector<TokenId>, std::vector<double>> entries,
    std::vector<double> default_dist)
    : vocab_(std::move(vocab)),
      entries_(std::move(entries)),
      default_dist_(std::move(default_dist)) {
  if (!vocab_) throw ContractError("table model without vocabulary");
  validate_dist(default_dist_, vocab_->size(), "table model default");
  for (const auto& [prefix, dist] : entries_) {
    for (TokenId id : prefix) {
      if (id >= vocab_->size()) {
        throw ContractError("table model: unknown token id in prefix");
      }
    }
    validate_dist(dist, vocab_->size(), "table model entry");
  }
}

std::vector<double> TableModel::next_dist_raw(
    std::span<const TokenId> prefix) const {
  const std::vector<TokenId> key(prefix.begin(), prefix.end());
  auto it = entries_.find(key);
  if (it != entries_.end()) return it->second;
  return default_dist_;
}

std::shared_ptr<const TableModel> TableModel::from_json_text(
    std::shared_ptr<const Vocabulary> vocab, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("table model json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("default")) {
    throw UsageError("table model json: expected object with default dist");
  }
  std::map<std::vector<TokenId>, std::vector<double>> entries;
  try {
    if (j.contains("entries")) {
      for (const auto& e : j.at("entries")) {
        entries[e.at("prefix").get<std::vector<TokenId>>()] =
            e.at("dist").get<std::vector<double>>();
      }
    }
    return std::make_shared<const TableModel>(
        std::move(vocab), std::move(entries),
        j.at("default").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("table model json: ") + e.what());
  }
}

std::shared_ptr<const TableModel> TableModel::from_file(
    std::shared_ptr<const Vocabulary> vocab, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open table model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(std::move(vocab), buf.str());
}

std::string NgramModel::pack_context(std::span<const TokenId> ctx) {
  std::string key(ctx.size() * sizeof(TokenId), '\0');
  if (!ctx.empty()) {
    std::memcpy(key.data(), ctx.data(), ctx.size() * sizeof(TokenId));
  }
  return key;
}

NgramModel::NgramModel(std::shared_ptr<const Vocabulary> vocab,
                       const std::vector<std::vector<TokenId>>& records,
                       std::uint32_t order, double alpha)
    : vocab_(std::move(vocab)), order_(order), alpha_(alpha) {
  if (!vocab_) throw ContractError("ngram model without vocabulary");
  if (order_ < 1) throw UsageError("ngram order must be at least 1");
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw UsageError("ngram smoothing alpha must be positive");
  }
  const std::size_t ctx_len = order_ - 1;
  for (const auto& raw : records) {
    std::vector<TokenId> rec = raw;
    // Strip an explicit trailing terminator; it is re-added as a target.
    if (vocab_->has_eos() && !rec.empty() && rec.back() == vocab_->eos_id()) {
      rec.pop_back();
    }
    for (TokenId id : rec) {
      if (id >= vocab_->size()) {
        throw ContractError("ngram corpus: unknown token id " +
                            std::to_string(id));
      }
      if (vocab_->is_eos(id)) {
        throw ContractError("ngram corpus: eos inside a record");
      }
    }
    const std::size_t targets = rec.size() + (vocab_->has_eos() ? 1 : 0);
    for (std::size_t i = 0; i < targets; ++i) {
      const std::size_t lo = i > ctx_len ? i - ctx_len : 0;
      const auto ctx = std::span<const TokenId>(rec.data() + lo, i - lo);
      const TokenId target =
          i < rec.size() ? rec[i] : vocab_->eos_id();
      auto& bucket = counts_[pack_context(ctx)];
      bucket.per_token[target] += 1;
      bucket.total += 1;
    }
  }
}

std::vector<double> NgramModel::next_dist_raw(
    std::span<const TokenId> prefix) const {
  const std::size_t ctx_len =
      std::min<std::size_t>(order_ - 1, prefix.size());
  const auto ctx = prefix.subspan(prefix.size() - ctx_len, ctx_len);
  const std::size_t v = vocab_->size();
  std::vector<double> dist(v, 0.0);
  const auto it = counts_.find(pack_context(ctx));
  const double total = it == counts_.end() ? 0.0
                                           : static_cast<double>(it->second.total);
  const double denom = total + alpha_ * static_cast<double>(v);
  for (TokenId id = 0; id < v; ++id) {
    double count = 0.0;
    if (it != counts_.end()) {
      const auto ct = it->second.per_token.find(id);
      if (ct != it->second.per_token.end()) {
        count = static_cast<double>(ct->second);
      }
    }
    dist[id] = (count + alpha_) / denom;
  }
  return dist;
}

std::shared_ptr<const NgramModel> NgramModel::from_corpus_file(
    std::shared_ptr<const Vocabulary> vocab, const std::string& path,
    std::uint32_t order, double alpha) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open ngram corpus file: " + path);
  std::vector<std::vector<TokenId>> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(parse_id_list(line));
  }
  if (records.empty()) throw UsageError("ngram corpus is empty: " + path);
  return std::make_shared<const NgramModel>(std::move(vocab), records, order,
                                            alpha);
}

std::vector<TokenId> parse_id_list(const std::string& line) {
  std::vector<TokenId> ids;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    try {
      const unsigned long v = std::stoul(tok);
      if (v > UINT32_MAX) throw std::out_of_range("id");
      ids.push_back(static_cast<TokenId>(v));
    } catch (const std::exception&) {
      throw UsageError("bad token id '" + tok + "'");
    }
  }
  return ids;
}

}  // namespace toksim
