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

#ifndef TOKSIM_ECONOMICS_HPP_
#define TOKSIM_ECONOMICS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "toksim/policies.hpp"
#include "toksim/pricing.hpp"
#include "toksim/sequence.hpp"

namespace toksim {

// Provider side costs, both per unit: c_o per generated token, c_v per
// plausibility verification.
struct CostModel {
  double c_o;  // >= 0
  double c_v;  // >= 0
};

// Measured energy cost per token over energy cost per verification for a
// range of model/hardware pairings; shipped as ready-made defaults for
// configs and sweeps.
inline constexpr double kEnergyCostRatios[] = {0.174, 0.302, 0.509, 0.298,
                                               0.413};

// c_gen(t) = c_o * len(t); generation is priced by the true sequence.
double generation_cost(const CostModel& costs, std::size_t len_true);

// c_v if the outcome ran a plausibility verification, else 0.
double reporting_cost(const CostModel& costs, const ReportOutcome& outcome);

// U = r(reported) - c_gen(true) - c_policy.
double utility(double revenue, double gen_cost, double rep_cost);

// rho = 1 - c_gen / r. Requires positive revenue.
double margin(double revenue, double gen_cost);

// Per-token margin of a truthful per-token provider: 1 - c_o/r_o.
double per_token_margin(const CostModel& costs, double r_o);

// Misreporting with success probability e_plausible and m extra tokens per
// success pays off exactly when e_plausible * m * r_o > c_v, equivalently
// when the margin exceeds 1 - e_plausible * m * c_o / c_v. Requires
// c_v > 0.
double profitability_margin_threshold(double e_plausible, double m,
                                      const CostModel& costs);
bool misreporting_profitable(double e_plausible, double m, double r_o,
                             const CostModel& costs);

// Token-weighted overcharge of a batch: 100 * (sum reported - sum true) /
// sum true. Requires a positive true total.
struct LenPair {
  std::uint64_t len_true;
  std::uint64_t len_reported;
};
double overcharge_pct(const std::vector<LenPair>& pairs);

// Tokens a competitor needs to bill for the same string when its tokenizer
// emits alpha times as many characters per token: ceil(len / alpha).
std::uint64_t undercut_equivalent_length(std::uint64_t len, double alpha);

// One output in a provider's books.
struct LedgerEntry {
  std::string prompt_id;
  std::uint64_t len_true = 0;
  std::uint64_t len_reported = 0;
  std::uint64_t chars = 0;
  double revenue = 0.0;
  double gen_cost = 0.0;
  double rep_cost = 0.0;
  double utility = 0.0;
  double margin = 0.0;
};

// Prices the outcome and fills in every derived column. Enforces string
// preservation between true and reported sequences (ContractError).
LedgerEntry make_ledger_entry(const std::string& prompt_id,
                              const PricingMechanism& mech,
                              const CostModel& costs,
                              const TokenSequence& true_seq,
                              const ReportOutcome& outcome);

}  // namespace toksim

#endif  // TOKSIM_ECONOMICS_HPP_
