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

#ifndef TOKSIM_PRICING_HPP_
#define TOKSIM_PRICING_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "toksim/sequence.hpp"
#include "toksim/vocab.hpp"

namespace toksim {

// Output pricing mechanisms. The EOS terminator is always free: it adds no
// billable token and no characters.

// r(t) = r_o * len(t). Sensitive to how the string is cut into tokens,
// which is exactly what a misreporting provider exploits.
struct PerTokenPricing {
  double r_o;  // > 0
};

// r(t) = r_c * char_count(t). Depends on the rendered string only.
struct PerCharPricing {
  double r_c;  // > 0
};

// r(t) = sum over rendered characters of a per-character price. The
// additive family from the characterization: every incentive compatible
// additive mechanism has this form. Prices must cover the whole alphabet
// of any sequence priced; a missing character raises ContractError.
//
// File format: {"a": 1.0, "b": 2.0}
struct CharTablePricing {
  std::map<char32_t, double> prices;  // each > 0
};

using PricingMechanism =
    std::variant<PerTokenPricing, PerCharPricing, CharTablePricing>;

// Spec strings: "per-token:r_o=1.0", "per-char:r_c=0.325",
// "char-table:prices.json" (path resolved by the caller).
PricingMechanism parse_mechanism(const std::string& text);
std::string format_mechanism(const PricingMechanism& mech);
CharTablePricing char_table_from_file(const std::string& path);

double price(const PricingMechanism& mech, const TokenSequence& seq);

// Maximum price of any tokenization of the rendered string, for mechanisms
// where that is cheap to state: used for bounds in the oracles.
double char_price_sum(const CharTablePricing& mech, const std::string& s);

// Two same-string token sequences priced differently: proof that truthful
// reporting is not utility maximizing under the mechanism.
struct ICWitness {
  TokenSequence a;
  TokenSequence b;
  double price_a;
  double price_b;
};

struct ICResult {
  bool compatible;
  std::optional<ICWitness> witness;
  std::uint64_t strings_checked = 0;
  std::uint64_t sequences_checked = 0;
};

// Decides incentive compatibility by the same-string criterion: the
// mechanism is IC over string preserving reports if and only if it prices
// every pair of tokenizations of the same string identically. Exhaustive
// over all strings up to max_chars characters (alphabet closure makes every
// such string reachable). Complete for additive mechanisms once max_chars
// reaches the longest token rendering; prices compare with 1e-9 tolerance
// to ignore summation order noise.
ICResult check_incentive_compatibility(
    const PricingMechanism& mech,
    const std::shared_ptr<const Vocabulary>& vocab, std::size_t max_chars);

// One output's usage for tariff calibration.
struct UsageRecord {
  std::uint64_t tokens;
  std::uint64_t chars;  // > 0
};

struct TpcCalibration {
  double tpc;  // mean of per-output tokens/chars ratios
  double r_c;  // r_o * tpc
};

// Revenue neutral per-character tariff from a usage corpus: tpc is the mean
// of per-output token/char ratios (each output weighted equally), and
// r_c = r_o * tpc. With this tariff the mean per-output margin over the
// calibration corpus equals the per-token margin 1 - c_o/r_o exactly.
TpcCalibration calibrate_tpc(const std::vector<UsageRecord>& corpus,
                             double r_o);

}  // namespace toksim

#endif  // TOKSIM_PRICING_HPP_
