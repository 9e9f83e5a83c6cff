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

#ifndef TOKSIM_ORACLES_HPP_
#define TOKSIM_ORACLES_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "toksim/graph.hpp"
#include "toksim/pricing.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"

namespace toksim {

// Exhaustive search budgets. The problems these oracles solve are NP-hard
// in general, so every entry point is metered: exceeding a budget raises
// BudgetError rather than hanging.
struct OracleBudget {
  std::uint64_t max_nodes = 10'000'000;  // lattice nodes visited
  double max_seconds = 60.0;             // wall clock
  std::uint32_t max_graph_nodes = 10;    // Hamiltonian instances
};

struct LongestPlausibleResult {
  // Longest tokenization of the target string an auditor would accept;
  // empty when no tokenization at all is plausible (infeasible instance).
  // Among maximum length solutions, the lexicographically smallest id
  // sequence is returned.
  std::optional<TokenSequence> sequence;
  std::uint64_t nodes_explored = 0;
};

// Depth first search over the tokenization lattice of s with per-rule
// pruning: allowed-set membership for TopP/TopK, running probability
// against eps for SequenceThreshold (extension never raises probability),
// positive step probability for Unrestricted. Candidates never carry an
// EOS terminator.
LongestPlausibleResult longest_plausible(const GenerativeModel& model,
                                         const std::string& s,
                                         const SamplingRule& rule,
                                         Temperature temp,
                                         const OracleBudget& budget = {});

struct MaxRevenueResult {
  TokenSequence sequence;
  double revenue = 0.0;
  std::uint64_t nodes_explored = 0;
};

// Exhaustive branch and bound over all tokenizations of s, maximizing the
// mechanism price; plausibility is not consulted. Ties resolve to the
// lexicographically smallest id sequence. Under per-token pricing the
// optimum is always the all-single-character tokenization.
MaxRevenueResult max_revenue_tokenization(
    const std::shared_ptr<const Vocabulary>& vocab,
    const PricingMechanism& mech, const std::string& s,
    const OracleBudget& budget = {});

// Bitmask dynamic program, any start node. Graphs larger than
// budget.max_graph_nodes raise BudgetError.
bool hamiltonian_path_exists(const DirectedGraph& g,
                             const OracleBudget& budget = {});

}  // namespace toksim

#endif  // TOKSIM_ORACLES_HPP_
