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

#include "toksim/economics.hpp"

#include <cmath>

#include "toksim/errors.hpp"

namespace toksim {

double generation_cost(const CostModel& costs, std::size_t len_true) {
  return costs.c_o * static_cast<double>(len_true);
}

double reporting_cost(const CostModel& costs, const ReportOutcome& outcome) {
  return outcome.verification_charged ? costs.c_v : 0.0;
}

double utility(double revenue, double gen_cost, double rep_cost) {
  return revenue - gen_cost - rep_cost;
}

double margin(double revenue, double gen_cost) {
  if (!(revenue > 0.0)) {
    throw ContractError("margin undefined for non-positive revenue");
  }
  return 1.0 - gen_cost / revenue;
}

double per_token_margin(const CostModel& costs, double r_o) {
  return margin(r_o, costs.c_o);
}

double profitability_margin_threshold(double e_plausible, double m,
                                      const CostModel& costs) {
  if (!(costs.c_v > 0.0)) {
    throw UsageError("profitability threshold requires c_v > 0");
  }
  if (e_plausible < 0.0 || e_plausible > 1.0 || m < 0.0) {
    throw UsageError("profitability threshold requires e in [0,1], m >= 0");
  }
  return 1.0 - e_plausible * m * costs.c_o / costs.c_v;
}

bool misreporting_profitable(double e_plausible, double m, double r_o,
                             const CostModel& costs) {
  return e_plausible * m * r_o > costs.c_v;
}

double overcharge_pct(const std::vector<LenPair>& pairs) {
  std::uint64_t total_true = 0;
  std::uint64_t total_reported = 0;
  for (const auto& p : pairs) {
    total_true += p.len_true;
    total_reported += p.len_reported;
  }
  if (total_true == 0) {
    throw UsageError("overcharge undefined for an empty batch");
  }
  return 100.0 *
         (static_cast<double>(total_reported) -
          static_cast<double>(total_true)) /
         static_cast<double>(total_true);
}

std::uint64_t undercut_equivalent_length(std::uint64_t len, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw UsageError("undercut ratio must be positive");
  }
  const double q = std::ceil(static_cast<double>(len) / alpha);
  return static_cast<std::uint64_t>(q);
}

LedgerEntry make_ledger_entry(const std::string& prompt_id,
                              const PricingMechanism& mech,
                              const CostModel& costs,
                              const TokenSequence& true_seq,
                              const ReportOutcome& outcome) {
  if (outcome.reported.render() != true_seq.render()) {
    throw ContractError("ledger integrity: reported sequence renders a "
                        "different string (prompt " + prompt_id + ")");
  }
  LedgerEntry e;
  e.prompt_id = prompt_id;
  e.len_true = true_seq.len();
  e.len_reported = outcome.reported.len();
  e.chars = true_seq.char_count();
  e.revenue = price(mech, outcome.reported);
  e.gen_cost = generation_cost(costs, true_seq.len());
  e.rep_cost = reporting_cost(costs, outcome);
  e.utility = utility(e.revenue, e.gen_cost, e.rep_cost);
  e.margin = margin(e.revenue, e.gen_cost);
  return e;
}

}  // namespace toksim
