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

#ifndef TOKSIM_HARNESS_HPP_
#define TOKSIM_HARNESS_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toksim/config.hpp"
#include "toksim/economics.hpp"
#include "toksim/model.hpp"
#include "toksim/policies.hpp"
#include "toksim/pricing.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"
#include "toksim/vocab.hpp"

namespace toksim {

// Everything a sweep needs, loaded once from a config. Construction parses
// and validates all referenced files eagerly so simulate fails fast.
struct ExperimentContext {
  ExperimentConfig cfg;
  std::shared_ptr<const Vocabulary> vocab;
  std::shared_ptr<const GenerativeModel> model;
  SamplingRule rule;
  Temperature temperature;
  PricingMechanism mechanism;
  CostModel costs;
  std::vector<ReportingPolicy> policies;
  std::vector<PromptRecord> prompts;
  std::vector<PromptRecord> calibration;  // empty when not configured

  static ExperimentContext load(const ExperimentConfig& cfg);
};

// Per-output RNG stream key. Depends only on (master seed, prompt id,
// replication), never on scheduling, so parallel runs reproduce serial ones.
std::uint64_t output_stream_key(std::uint64_t master_seed,
                                const std::string& prompt_id, int replication);

// One model-sampled output. Zero-length samples (an immediate EOS draw) are
// redrawn from derived streams so every ledger row prices a real output.
struct SimOutput {
  std::string prompt_id;
  int replication = 0;
  std::uint64_t key = 0;
  TokenSequence truth;
};

std::vector<SimOutput> generate_outputs(const ExperimentContext& ctx,
                                        const std::vector<PromptRecord>& prompts);

// -- overcharge sweep ------------------------------------------------------

struct OverchargeRow {
  std::string policy;  // formatted with the swept m substituted in
  std::string family;
  int m = 0;
  int replication = 0;
  std::uint64_t n_outputs = 0;
  double overcharge_pct_tokens = 0.0;   // token-weighted across the batch
  double overcharge_pct_outputs = 0.0;  // mean of per-output percentages
  double plausible_fraction = 0.0;      // reported passes is_plausible
  double modified_fraction = 0.0;
  double mean_splits = 0.0;
  double mean_utility = 0.0;  // of micro-rounded utilities
};

struct OverchargeLedgerRow {
  std::string policy;
  int m = 0;
  int replication = 0;
  LedgerEntry entry;
};

struct OverchargeReport {
  std::vector<OverchargeRow> rows;
  std::vector<OverchargeLedgerRow> ledger;
  nlohmann::ordered_json summary;
};

OverchargeReport run_overcharge_sweep(const ExperimentContext& ctx,
                                      const std::vector<int>& m_values);

// -- profit sweep ----------------------------------------------------------

struct ProfitRow {
  double rho_o = 0.0;  // swept margin
  double r_o = 0.0;    // c_o / (1 - rho_o)
  int replication = 0;
  std::uint64_t n_outputs = 0;
  double mean_utility_truthful = 0.0;
  double mean_utility_heuristic = 0.0;
  double mean_gain_abs = 0.0;  // mean per-output utility difference
  double mean_gain_rel = 0.0;  // relative to mean truthful utility
  double modified_fraction = 0.0;
  double mean_extra_tokens = 0.0;
};

struct ProfitLedgerRow {
  double rho_o = 0.0;
  int replication = 0;
  std::string policy;
  LedgerEntry entry;
};

struct ProfitReport {
  std::vector<ProfitRow> rows;
  std::vector<ProfitLedgerRow> ledger;
  nlohmann::ordered_json summary;
  // measured plausible-acceptance rate, one value per replication, and the
  // heuristic iteration budget, for threshold comparisons
  std::vector<double> e_hat_per_rep;
  int m = 0;
};

// Uses the first heuristic policy in the config against an implicit
// truthful baseline; prices per token at r_o = c_o / (1 - rho_o).
ProfitReport run_profit_sweep(const ExperimentContext& ctx,
                              const std::vector<double>& margins);

// -- margin cdf sweep ------------------------------------------------------

struct MarginCdfPoint {
  double rho_o = 0.0;
  std::uint64_t index = 0;  // rank within this rho's sorted margins
  double margin = 0.0;
  double cdf = 0.0;
};

struct MarginCdfEntry {
  double rho_o = 0.0;
  double r_o = 0.0;
  double tpc = 0.0;
  double r_c = 0.0;
  std::uint64_t n_calibration = 0;
  std::uint64_t n_eval = 0;
  double mean_margin = 0.0;
  double positive_fraction = 0.0;
};

struct MarginCdfReport {
  std::vector<MarginCdfPoint> points;
  std::vector<MarginCdfEntry> entries;
  nlohmann::ordered_json summary;
};

// Calibrates a per-character price on one corpus and evaluates per-output
// margins on a disjoint one (the configured calibration corpus, or the
// first half of the prompt corpus when none is configured).
MarginCdfReport run_margin_cdf(const ExperimentContext& ctx,
                               const std::vector<double>& rho_values);

// -- persistence -----------------------------------------------------------

// Each writer creates out_dir if needed and returns the paths written.
std::vector<std::string> write_overcharge_report(const OverchargeReport& report,
                                                 const std::string& out_dir);
std::vector<std::string> write_profit_report(const ProfitReport& report,
                                             const std::string& out_dir);
std::vector<std::string> write_margin_cdf_report(const MarginCdfReport& report,
                                                 const std::string& out_dir);

}  // namespace toksim

#endif  // TOKSIM_HARNESS_HPP_
