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

#include "toksim/pricing.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toksim/errors.hpp"
#include "toksim/money.hpp"
#include "toksim/lattice.hpp"
#include "toksim/text.hpp"

namespace toksim {

namespace {

double parse_positive(const std::string& text, const std::string& what) {
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("bad " + what + ": '" + text + "'");
  }
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw UsageError(what + " must be positive");
  }
  return v;
}

}  // namespace

PricingMechanism parse_mechanism(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw UsageError("bad mechanism spec: '" + text + "'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "per-token") {
    if (arg.rfind("r_o=", 0) != 0) {
      throw UsageError("per-token mechanism takes r_o=<decimal>");
    }
    return PerTokenPricing{parse_positive(arg.substr(4), "r_o")};
  }
  if (kind == "per-char") {
    if (arg.rfind("r_c=", 0) != 0) {
      throw UsageError("per-char mechanism takes r_c=<decimal>");
    }
    return PerCharPricing{parse_positive(arg.substr(4), "r_c")};
  }
  if (kind == "char-table") {
    if (arg.empty()) throw UsageError("char-table mechanism takes a path");
    return char_table_from_file(arg);
  }
  throw UsageError("unknown mechanism kind: '" + kind + "'");
}

std::string format_mechanism(const PricingMechanism& mech) {
  if (const auto* pt = std::get_if<PerTokenPricing>(&mech)) {
    return "per-token:r_o=" + format_double(pt->r_o);
  }
  if (const auto* pc = std::get_if<PerCharPricing>(&mech)) {
    return "per-char:r_c=" + format_double(pc->r_c);
  }
  return "char-table";
}

CharTablePricing char_table_from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open char table file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("char table json: ") + e.what());
  }
  if (!j.is_object() || j.empty()) {
    throw UsageError("char table json: expected a non-empty object");
  }
  CharTablePricing table;
  for (const auto& [key, value] : j.items()) {
    const auto scalars = decode_utf8(key);
    if (scalars.size() != 1) {
      throw UsageError("char table key '" + key +
                       "' is not a single character");
    }
    if (!value.is_number()) {
      throw UsageError("char table price for '" + key + "' is not a number");
    }
    const double p = value.get<double>();
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw UsageError("char table price for '" + key + "' must be positive");
    }
    table.prices[scalars[0]] = p;
  }
  return table;
}

double price(const PricingMechanism& mech, const TokenSequence& seq) {
  if (const auto* pt = std::get_if<PerTokenPricing>(&mech)) {
    return pt->r_o * static_cast<double>(seq.len());
  }
  if (const auto* pc = std::get_if<PerCharPricing>(&mech)) {
    return pc->r_c * static_cast<double>(seq.char_count());
  }
  const auto& table = std::get<CharTablePricing>(mech);
  double total = 0.0;
  for (TokenId id : seq.ids()) {
    if (seq.vocab().is_eos(id)) continue;
    for (char32_t c : decode_utf8(seq.vocab().rendering(id))) {
      const auto it = table.prices.find(c);
      if (it == table.prices.end()) {
        throw ContractError("char table has no price for '" + encode_utf8(c) +
                            "'");
      }
      total += it->second;
    }
  }
  return total;
}

double char_price_sum(const CharTablePricing& mech, const std::string& s) {
  double total = 0.0;
  for (char32_t c : decode_utf8(s)) {
    const auto it = mech.prices.find(c);
    if (it == mech.prices.end()) {
      throw ContractError("char table has no price for '" + encode_utf8(c) +
                          "'");
    }
    total += it->second;
  }
  return total;
}

namespace {

// Recursively visits every string over the alphabet up to max_chars,
// comparing tokenization prices within each string.
bool ic_scan(const PricingMechanism& mech,
             const std::shared_ptr<const Vocabulary>& vocab,
             std::string& s, std::size_t chars, std::size_t max_chars,
             ICResult& result) {
  result.strings_checked += 1;
  std::optional<std::vector<TokenId>> first;
  double first_price = 0.0;
  bool violation = false;
  enumerate_tokenizations(vocab, s, [&](const std::vector<TokenId>& ids) {
    result.sequences_checked += 1;
    const TokenSequence seq(vocab, ids);
    const double p = price(mech, seq);
    if (!first) {
      first = ids;
      first_price = p;
      return true;
    }
    if (std::fabs(p - first_price) > 1e-9) {
      result.witness = ICWitness{TokenSequence(vocab, *first), seq,
                                 first_price, p};
      violation = true;
      return false;
    }
    return true;
  });
  if (violation) return false;
  if (chars == max_chars) return true;
  for (char32_t c : vocab->alphabet()) {
    const std::string enc = encode_utf8(c);
    s += enc;
    const bool ok = ic_scan(mech, vocab, s, chars + 1, max_chars, result);
    s.resize(s.size() - enc.size());
    if (!ok) return false;
  }
  return true;
}

}  // namespace

ICResult check_incentive_compatibility(
    const PricingMechanism& mech,
    const std::shared_ptr<const Vocabulary>& vocab, std::size_t max_chars) {
  ICResult result{true, std::nullopt};
  std::string s;
  result.compatible = ic_scan(mech, vocab, s, 0, max_chars, result);
  return result;
}

TpcCalibration calibrate_tpc(const std::vector<UsageRecord>& corpus,
                             double r_o) {
  if (corpus.empty()) throw UsageError("tpc calibration corpus is empty");
  if (!(r_o > 0.0) || !std::isfinite(r_o)) {
    throw UsageError("r_o must be positive");
  }
  double sum = 0.0;
  for (const auto& rec : corpus) {
    if (rec.chars == 0) {
      throw UsageError("tpc calibration record with zero characters");
    }
    sum += static_cast<double>(rec.tokens) / static_cast<double>(rec.chars);
  }
  const double tpc = sum / static_cast<double>(corpus.size());
  return TpcCalibration{tpc, r_o * tpc};
}

}  // namespace toksim
