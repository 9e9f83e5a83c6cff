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

#include "toksim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <variant>

#include "toksim/errors.hpp"
#include "toksim/money.hpp"
#include "toksim/rng.hpp"
#include "toksim/stats.hpp"

namespace toksim {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Work items are claimed through an atomic counter, so any schedule computes
// the same per-index results; only the claiming order varies.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(fields[i]);
  }
  return line;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw UsageError("write failed: " + path.string());
}

fs::path ensure_out_dir(const std::string& out_dir) {
  fs::path dir(out_dir.empty() ? "." : out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory: " + dir.string());
  return dir;
}

ordered_json stat_json(const std::vector<double>& xs, double confidence) {
  ordered_json o;
  o["mean"] = mean(xs);
  o["half_width"] = ci_half_width(xs, confidence);
  return o;
}

// Utility after the books round it to micro units; every aggregate is built
// from these so summaries survive a CSV round trip.
double booked(double amount) { return from_micro(to_micro(amount)); }

std::string ledger_csv_line(const LedgerEntry& e) {
  return join_csv({e.prompt_id, std::to_string(e.len_true),
                   std::to_string(e.len_reported), std::to_string(e.chars),
                   format_money(e.revenue), format_money(e.gen_cost),
                   format_money(e.rep_cost), format_money(e.utility),
                   format_double(e.margin)});
}

// Applies a policy to one simulated output with the iteration budget
// overridden. Random policies mix their configured seed with the output's
// stream key so each output splits independently but reproducibly.
ReportOutcome apply_sim_policy(const ReportingPolicy& policy, std::uint32_t m,
                               const SimOutput& out,
                               const GenerativeModel& model) {
  if (std::holds_alternative<TruthfulPolicy>(policy)) {
    return apply_truthful(out.truth);
  }
  if (const auto* r = std::get_if<RandomSplitPolicy>(&policy)) {
    return apply_random_split(out.truth, m, derive_stream(r->seed, out.key));
  }
  const auto& h = std::get<HeuristicPolicy>(policy);
  return apply_heuristic(out.truth, m, model, h.rule, h.temp);
}

// Row label with the swept m substituted into the policy string.
std::string policy_label(const ReportingPolicy& policy, std::uint32_t m) {
  ReportingPolicy copy = policy;
  if (auto* r = std::get_if<RandomSplitPolicy>(&copy)) r->m = m;
  if (auto* h = std::get_if<HeuristicPolicy>(&copy)) h->m = m;
  return format_policy(copy);
}

const HeuristicPolicy* first_heuristic(const std::vector<ReportingPolicy>& ps) {
  for (const auto& p : ps) {
    if (const auto* h = std::get_if<HeuristicPolicy>(&p)) return h;
  }
  return nullptr;
}

}  // namespace

ExperimentContext ExperimentContext::load(const ExperimentConfig& cfg) {
  ExperimentContext ctx;
  ctx.cfg = cfg;
  ctx.vocab = Vocabulary::from_file(cfg.vocabulary);
  if (cfg.model.type == "table") {
    ctx.model = TableModel::from_file(ctx.vocab, cfg.model.path);
  } else if (cfg.model.type == "ngram") {
    ctx.model = NgramModel::from_corpus_file(
        ctx.vocab, cfg.model.path, static_cast<std::uint32_t>(cfg.model.order),
        cfg.model.alpha);
  } else {
    throw UsageError("unknown model type: " + cfg.model.type);
  }
  ctx.rule = parse_rule(cfg.rule);
  if (!(cfg.temperature > 0.0) || !std::isfinite(cfg.temperature)) {
    throw UsageError("temperature must be a positive finite number");
  }
  ctx.temperature = Temperature{cfg.temperature};
  ctx.mechanism = parse_mechanism(cfg.mechanism);
  ctx.costs = CostModel{cfg.c_o, cfg.c_v};
  for (const auto& p : cfg.policies) ctx.policies.push_back(parse_policy(p));
  ctx.prompts = load_prompts(cfg.prompts);
  if (!cfg.calibration_prompts.empty()) {
    ctx.calibration = load_prompts(cfg.calibration_prompts);
  }
  return ctx;
}

std::uint64_t output_stream_key(std::uint64_t master_seed,
                                const std::string& prompt_id,
                                int replication) {
  return hash_bytes(prompt_id,
                    derive_stream(master_seed,
                                  static_cast<std::uint64_t>(replication)));
}

std::vector<SimOutput> generate_outputs(
    const ExperimentContext& ctx, const std::vector<PromptRecord>& prompts) {
  const auto& cfg = ctx.cfg;
  const std::size_t n_prompts = prompts.size();
  const std::size_t n_items =
      n_prompts * static_cast<std::size_t>(cfg.replications);
  std::vector<std::optional<SimOutput>> slots(n_items);

  parallel_for(n_items, cfg.threads, [&](std::size_t i) {
    const int rep = static_cast<int>(i / n_prompts);
    const PromptRecord& prompt = prompts[i % n_prompts];
    const std::uint64_t key = output_stream_key(cfg.seed, prompt.id, rep);
    SplitMix64 gen(key);
    const std::uint64_t span = static_cast<std::uint64_t>(cfg.max_output_len) -
                               static_cast<std::uint64_t>(cfg.min_output_len) + 1;
    const std::size_t max_len =
        static_cast<std::size_t>(cfg.min_output_len) + gen.below(span);
    // a zero-length output (immediate EOS) cannot be priced; redraw from
    // derived streams, deterministically, with a sanity bound
    for (std::uint64_t attempt = 1; attempt <= 64; ++attempt) {
      TokenSequence seq = sample_output(*ctx.model, ctx.rule, ctx.temperature,
                                        max_len, derive_stream(key, attempt));
      if (seq.len() > 0) {
        slots[i] = SimOutput{prompt.id, rep, key, std::move(seq)};
        return;
      }
    }
    throw ContractError("model produced 64 empty outputs in a row for prompt '" +
                        prompt.id + "'");
  });

  std::vector<SimOutput> outputs;
  outputs.reserve(n_items);
  for (auto& slot : slots) outputs.push_back(std::move(*slot));
  return outputs;
}

OverchargeReport run_overcharge_sweep(const ExperimentContext& ctx,
                                      const std::vector<int>& m_values) {
  if (m_values.empty()) {
    throw UsageError("overcharge sweep needs a non-empty m_values list");
  }
  for (int m : m_values) {
    if (m < 0) throw UsageError("m values must be >= 0");
  }

  const std::vector<SimOutput> outputs = generate_outputs(ctx, ctx.prompts);
  const std::size_t n_prompts = ctx.prompts.size();
  const std::size_t n_outputs = outputs.size();
  const std::size_t n_policies = ctx.policies.size();
  const std::size_t n_ms = m_values.size();

  struct Cell {
    LedgerEntry entry;
    bool plausible = false;
    bool modified = false;
    std::uint32_t splits = 0;
  };
  std::vector<std::optional<Cell>> cells(n_policies * n_ms * n_outputs);
  auto cell_at = [&](std::size_t p, std::size_t mi, std::size_t oi) -> auto& {
    return cells[(p * n_ms + mi) * n_outputs + oi];
  };

  parallel_for(n_outputs, ctx.cfg.threads, [&](std::size_t oi) {
    const SimOutput& out = outputs[oi];
    for (std::size_t p = 0; p < n_policies; ++p) {
      for (std::size_t mi = 0; mi < n_ms; ++mi) {
        const auto m = static_cast<std::uint32_t>(m_values[mi]);
        ReportOutcome outcome =
            apply_sim_policy(ctx.policies[p], m, out, *ctx.model);
        Cell cell;
        cell.plausible = is_plausible(*ctx.model, outcome.reported, ctx.rule,
                                      ctx.temperature);
        cell.modified = outcome.modified;
        cell.splits = outcome.splits_applied;
        cell.entry = make_ledger_entry(out.prompt_id, ctx.mechanism, ctx.costs,
                                       out.truth, outcome);
        cell_at(p, mi, oi) = std::move(cell);
      }
    }
  });

  OverchargeReport report;
  ordered_json summary;
  summary["sweep"] = "overcharge";
  summary["rule"] = format_rule(ctx.rule);
  summary["temperature"] = ctx.cfg.temperature;
  summary["mechanism"] = format_mechanism(ctx.mechanism);
  summary["replications"] = ctx.cfg.replications;
  summary["confidence"] = ctx.cfg.confidence;
  summary["n_prompts"] = n_prompts;
  summary["m_values"] = m_values;
  summary["policies"] = ordered_json::array();

  for (std::size_t p = 0; p < n_policies; ++p) {
    ordered_json policy_summary;
    policy_summary["family"] = policy_family(ctx.policies[p]);
    policy_summary["by_m"] = ordered_json::array();
    double best_mean = 0.0;
    int best_m = 0;
    bool have_best = false;

    for (std::size_t mi = 0; mi < n_ms; ++mi) {
      const int m = m_values[mi];
      const std::string label =
          policy_label(ctx.policies[p], static_cast<std::uint32_t>(m));
      std::vector<double> oc_tokens, oc_outputs, plaus, modif, splits, utils;

      for (int rep = 0; rep < ctx.cfg.replications; ++rep) {
        std::vector<LenPair> pairs;
        std::vector<double> per_output_pct, per_output_util, per_output_splits;
        std::uint64_t n_plausible = 0, n_modified = 0;
        for (std::size_t pi = 0; pi < n_prompts; ++pi) {
          const std::size_t oi = static_cast<std::size_t>(rep) * n_prompts + pi;
          const Cell& cell = *cell_at(p, mi, oi);
          pairs.push_back({cell.entry.len_true, cell.entry.len_reported});
          per_output_pct.push_back(
              100.0 *
              (static_cast<double>(cell.entry.len_reported) -
               static_cast<double>(cell.entry.len_true)) /
              static_cast<double>(cell.entry.len_true));
          per_output_util.push_back(booked(cell.entry.utility));
          per_output_splits.push_back(static_cast<double>(cell.splits));
          n_plausible += cell.plausible ? 1 : 0;
          n_modified += cell.modified ? 1 : 0;
          report.ledger.push_back({label, m, rep, cell.entry});
        }
        OverchargeRow row;
        row.policy = label;
        row.family = policy_family(ctx.policies[p]);
        row.m = m;
        row.replication = rep;
        row.n_outputs = n_prompts;
        row.overcharge_pct_tokens = overcharge_pct(pairs);
        row.overcharge_pct_outputs = mean(per_output_pct);
        row.plausible_fraction =
            static_cast<double>(n_plausible) / static_cast<double>(n_prompts);
        row.modified_fraction =
            static_cast<double>(n_modified) / static_cast<double>(n_prompts);
        row.mean_splits = mean(per_output_splits);
        row.mean_utility = mean(per_output_util);
        report.rows.push_back(row);

        oc_tokens.push_back(row.overcharge_pct_tokens);
        oc_outputs.push_back(row.overcharge_pct_outputs);
        plaus.push_back(row.plausible_fraction);
        modif.push_back(row.modified_fraction);
        splits.push_back(row.mean_splits);
        utils.push_back(row.mean_utility);
      }

      ordered_json m_summary;
      m_summary["m"] = m;
      m_summary["policy"] = label;
      m_summary["overcharge_pct_tokens"] = stat_json(oc_tokens, ctx.cfg.confidence);
      m_summary["overcharge_pct_outputs"] =
          stat_json(oc_outputs, ctx.cfg.confidence);
      m_summary["plausible_fraction"] = stat_json(plaus, ctx.cfg.confidence);
      m_summary["modified_fraction"] = stat_json(modif, ctx.cfg.confidence);
      m_summary["mean_splits"] = stat_json(splits, ctx.cfg.confidence);
      m_summary["mean_utility"] = stat_json(utils, ctx.cfg.confidence);
      policy_summary["by_m"].push_back(std::move(m_summary));

      const double oc_mean = mean(oc_tokens);
      if (!have_best || oc_mean > best_mean ||
          (oc_mean == best_mean && m < best_m)) {
        have_best = true;
        best_mean = oc_mean;
        best_m = m;
      }
    }
    policy_summary["optimal_m"] = best_m;
    policy_summary["optimal_m_overcharge_pct_tokens_mean"] = best_mean;
    summary["policies"].push_back(std::move(policy_summary));
  }

  report.summary = std::move(summary);
  return report;
}

ProfitReport run_profit_sweep(const ExperimentContext& ctx,
                              const std::vector<double>& margins) {
  if (margins.empty()) {
    throw UsageError("profit sweep needs a non-empty margins list");
  }
  for (double rho : margins) {
    if (!(rho > 0.0 && rho < 1.0)) {
      throw UsageError("profit margins must lie strictly inside (0,1)");
    }
  }
  const HeuristicPolicy* heuristic = first_heuristic(ctx.policies);
  if (heuristic == nullptr) {
    throw UsageError("profit sweep needs a heuristic policy in the config");
  }
  if (!(ctx.cfg.c_o > 0.0)) {
    throw UsageError("profit sweep needs c_o > 0 to derive per-token prices");
  }

  const std::vector<SimOutput> outputs = generate_outputs(ctx, ctx.prompts);
  const std::size_t n_prompts = ctx.prompts.size();
  const std::size_t n_outputs = outputs.size();

  // the heuristic never sees prices, so one application serves every margin
  struct Applied {
    ReportOutcome truthful;
    ReportOutcome heuristic;
  };
  std::vector<std::optional<Applied>> applied(n_outputs);
  parallel_for(n_outputs, ctx.cfg.threads, [&](std::size_t oi) {
    const SimOutput& out = outputs[oi];
    applied[oi] = Applied{
        apply_truthful(out.truth),
        apply_heuristic(out.truth, heuristic->m, *ctx.model, heuristic->rule,
                        heuristic->temp)};
  });

  ProfitReport report;
  report.m = static_cast<int>(heuristic->m);
  const std::string heuristic_label = format_policy(*heuristic);

  std::vector<double> extra_per_rep;
  for (int rep = 0; rep < ctx.cfg.replications; ++rep) {
    std::uint64_t n_modified = 0;
    std::vector<double> extras;
    for (std::size_t pi = 0; pi < n_prompts; ++pi) {
      const Applied& app =
          *applied[static_cast<std::size_t>(rep) * n_prompts + pi];
      n_modified += app.heuristic.modified ? 1 : 0;
      extras.push_back(static_cast<double>(app.heuristic.splits_applied));
    }
    report.e_hat_per_rep.push_back(static_cast<double>(n_modified) /
                                   static_cast<double>(n_prompts));
    extra_per_rep.push_back(mean(extras));
  }

  ordered_json summary;
  summary["sweep"] = "profit";
  summary["policy"] = heuristic_label;
  summary["m"] = report.m;
  summary["c_o"] = ctx.cfg.c_o;
  summary["c_v"] = ctx.cfg.c_v;
  summary["replications"] = ctx.cfg.replications;
  summary["confidence"] = ctx.cfg.confidence;
  summary["n_prompts"] = n_prompts;
  summary["e_plausible"] = stat_json(report.e_hat_per_rep, ctx.cfg.confidence);
  summary["e_plausible"]["per_rep"] = report.e_hat_per_rep;
  summary["mean_extra_tokens"] = stat_json(extra_per_rep, ctx.cfg.confidence);

  // analytic break-even margin at the measured acceptance rate; undefined
  // with free verification or a zero iteration budget
  if (ctx.cfg.c_v > 0.0 && report.m > 0) {
    const double e_mean = mean(report.e_hat_per_rep);
    const double hw = ci_half_width(report.e_hat_per_rep, ctx.cfg.confidence);
    const double e_hi = std::min(1.0, e_mean + hw);
    const double e_lo = std::max(0.0, e_mean - hw);
    ordered_json thr;
    thr["rho_star"] =
        profitability_margin_threshold(e_mean, report.m, ctx.costs);
    thr["rho_star_low"] =
        profitability_margin_threshold(e_hi, report.m, ctx.costs);
    thr["rho_star_high"] =
        profitability_margin_threshold(e_lo, report.m, ctx.costs);
    summary["analytic_threshold"] = std::move(thr);
  } else {
    summary["analytic_threshold"] = nullptr;
  }
  summary["margins"] = ordered_json::array();

  for (double rho : margins) {
    const double r_o = ctx.cfg.c_o / (1.0 - rho);
    const PricingMechanism mech = PerTokenPricing{r_o};
    std::vector<double> gain_abs_reps, gain_rel_reps, util_t_reps, util_h_reps;

    for (int rep = 0; rep < ctx.cfg.replications; ++rep) {
      std::vector<double> utils_t, utils_h, gains;
      for (std::size_t pi = 0; pi < n_prompts; ++pi) {
        const std::size_t oi = static_cast<std::size_t>(rep) * n_prompts + pi;
        const SimOutput& out = outputs[oi];
        const Applied& app = *applied[oi];
        LedgerEntry e_t = make_ledger_entry(out.prompt_id, mech, ctx.costs,
                                            out.truth, app.truthful);
        LedgerEntry e_h = make_ledger_entry(out.prompt_id, mech, ctx.costs,
                                            out.truth, app.heuristic);
        const double u_t = booked(e_t.utility);
        const double u_h = booked(e_h.utility);
        utils_t.push_back(u_t);
        utils_h.push_back(u_h);
        gains.push_back(u_h - u_t);
        report.ledger.push_back({rho, rep, "truthful", e_t});
        report.ledger.push_back({rho, rep, heuristic_label, e_h});
      }
      ProfitRow row;
      row.rho_o = rho;
      row.r_o = r_o;
      row.replication = rep;
      row.n_outputs = n_prompts;
      row.mean_utility_truthful = mean(utils_t);
      row.mean_utility_heuristic = mean(utils_h);
      row.mean_gain_abs = mean(gains);
      row.mean_gain_rel = row.mean_gain_abs / row.mean_utility_truthful;
      row.modified_fraction = report.e_hat_per_rep[rep];
      row.mean_extra_tokens = extra_per_rep[rep];
      report.rows.push_back(row);

      gain_abs_reps.push_back(row.mean_gain_abs);
      gain_rel_reps.push_back(row.mean_gain_rel);
      util_t_reps.push_back(row.mean_utility_truthful);
      util_h_reps.push_back(row.mean_utility_heuristic);
    }

    ordered_json m_summary;
    m_summary["rho_o"] = rho;
    m_summary["r_o"] = r_o;
    m_summary["mean_utility_truthful"] =
        stat_json(util_t_reps, ctx.cfg.confidence);
    m_summary["mean_utility_heuristic"] =
        stat_json(util_h_reps, ctx.cfg.confidence);
    m_summary["gain_abs"] = stat_json(gain_abs_reps, ctx.cfg.confidence);
    m_summary["gain_rel"] = stat_json(gain_rel_reps, ctx.cfg.confidence);
    summary["margins"].push_back(std::move(m_summary));
  }

  report.summary = std::move(summary);
  return report;
}

MarginCdfReport run_margin_cdf(const ExperimentContext& ctx,
                               const std::vector<double>& rho_values) {
  if (rho_values.empty()) {
    throw UsageError("margin-cdf sweep needs a non-empty rho_values list");
  }
  for (double rho : rho_values) {
    if (!(rho > 0.0 && rho < 1.0)) {
      throw UsageError("rho values must lie strictly inside (0,1)");
    }
  }
  if (!(ctx.cfg.c_o > 0.0)) {
    throw UsageError("margin-cdf sweep needs c_o > 0 to derive prices");
  }

  std::vector<PromptRecord> calib_prompts, eval_prompts;
  if (!ctx.calibration.empty()) {
    calib_prompts = ctx.calibration;
    eval_prompts = ctx.prompts;
  } else {
    if (ctx.prompts.size() < 2) {
      throw UsageError(
          "margin-cdf needs a calibration corpus or at least two prompts to "
          "split");
    }
    const std::size_t half = ctx.prompts.size() / 2;
    calib_prompts.assign(ctx.prompts.begin(), ctx.prompts.begin() + half);
    eval_prompts.assign(ctx.prompts.begin() + half, ctx.prompts.end());
  }

  const std::vector<SimOutput> calib_outputs =
      generate_outputs(ctx, calib_prompts);
  const std::vector<SimOutput> eval_outputs = generate_outputs(ctx, eval_prompts);

  std::vector<UsageRecord> records;
  records.reserve(calib_outputs.size());
  for (const SimOutput& out : calib_outputs) {
    records.push_back({out.truth.len(), out.truth.char_count()});
  }

  MarginCdfReport report;
  ordered_json summary;
  summary["sweep"] = "margin-cdf";
  summary["rule"] = format_rule(ctx.rule);
  summary["temperature"] = ctx.cfg.temperature;
  summary["c_o"] = ctx.cfg.c_o;
  summary["replications"] = ctx.cfg.replications;
  summary["n_calibration_outputs"] = calib_outputs.size();
  summary["n_eval_outputs"] = eval_outputs.size();
  summary["rhos"] = ordered_json::array();

  for (double rho : rho_values) {
    const double r_o = ctx.cfg.c_o / (1.0 - rho);
    const TpcCalibration cal = calibrate_tpc(records, r_o);

    std::vector<double> margins;
    margins.reserve(eval_outputs.size());
    for (const SimOutput& out : eval_outputs) {
      const double revenue =
          cal.r_c * static_cast<double>(out.truth.char_count());
      margins.push_back(margin(revenue, generation_cost(ctx.costs, out.truth.len())));
    }
    std::stable_sort(margins.begin(), margins.end());

    std::uint64_t positive = 0;
    for (std::size_t j = 0; j < margins.size(); ++j) {
      report.points.push_back(
          {rho, j, margins[j],
           static_cast<double>(j + 1) / static_cast<double>(margins.size())});
      if (margins[j] > 0.0) ++positive;
    }

    MarginCdfEntry entry;
    entry.rho_o = rho;
    entry.r_o = r_o;
    entry.tpc = cal.tpc;
    entry.r_c = cal.r_c;
    entry.n_calibration = records.size();
    entry.n_eval = margins.size();
    entry.mean_margin = mean(margins);
    entry.positive_fraction =
        static_cast<double>(positive) / static_cast<double>(margins.size());
    report.entries.push_back(entry);

    ordered_json rho_summary;
    rho_summary["rho_o"] = rho;
    rho_summary["r_o"] = r_o;
    rho_summary["tpc"] = entry.tpc;
    rho_summary["r_c"] = entry.r_c;
    rho_summary["n_eval"] = entry.n_eval;
    rho_summary["mean_margin"] = entry.mean_margin;
    rho_summary["positive_fraction"] = entry.positive_fraction;
    summary["rhos"].push_back(std::move(rho_summary));
  }

  report.summary = std::move(summary);
  return report;
}

std::vector<std::string> write_overcharge_report(const OverchargeReport& report,
                                                 const std::string& out_dir) {
  const fs::path dir = ensure_out_dir(out_dir);

  std::string rows =
      "policy,family,m,replication,n_outputs,overcharge_pct_tokens,"
      "overcharge_pct_outputs,plausible_fraction,modified_fraction,"
      "mean_splits,mean_utility\n";
  for (const OverchargeRow& r : report.rows) {
    rows += join_csv({r.policy, r.family, std::to_string(r.m),
                      std::to_string(r.replication), std::to_string(r.n_outputs),
                      format_double(r.overcharge_pct_tokens),
                      format_double(r.overcharge_pct_outputs),
                      format_double(r.plausible_fraction),
                      format_double(r.modified_fraction),
                      format_double(r.mean_splits),
                      format_double(r.mean_utility)});
    rows += '\n';
  }

  std::string ledger =
      "policy,m,replication,prompt_id,len_true,len_reported,chars,revenue,"
      "gen_cost,rep_cost,utility,margin\n";
  for (const OverchargeLedgerRow& r : report.ledger) {
    ledger += join_csv({r.policy, std::to_string(r.m),
                        std::to_string(r.replication)});
    ledger += ',';
    ledger += ledger_csv_line(r.entry);
    ledger += '\n';
  }

  const fs::path rows_path = dir / "overcharge_rows.csv";
  const fs::path ledger_path = dir / "overcharge_ledger.csv";
  const fs::path summary_path = dir / "overcharge_summary.json";
  write_text_file(rows_path, rows);
  write_text_file(ledger_path, ledger);
  write_text_file(summary_path, report.summary.dump(2) + "\n");
  return {rows_path.string(), ledger_path.string(), summary_path.string()};
}

std::vector<std::string> write_profit_report(const ProfitReport& report,
                                             const std::string& out_dir) {
  const fs::path dir = ensure_out_dir(out_dir);

  std::string rows =
      "rho_o,r_o,replication,n_outputs,mean_utility_truthful,"
      "mean_utility_heuristic,mean_gain_abs,mean_gain_rel,modified_fraction,"
      "mean_extra_tokens\n";
  for (const ProfitRow& r : report.rows) {
    rows += join_csv({format_double(r.rho_o), format_double(r.r_o),
                      std::to_string(r.replication), std::to_string(r.n_outputs),
                      format_double(r.mean_utility_truthful),
                      format_double(r.mean_utility_heuristic),
                      format_double(r.mean_gain_abs),
                      format_double(r.mean_gain_rel),
                      format_double(r.modified_fraction),
                      format_double(r.mean_extra_tokens)});
    rows += '\n';
  }

  std::string ledger =
      "rho_o,replication,policy,prompt_id,len_true,len_reported,chars,revenue,"
      "gen_cost,rep_cost,utility,margin\n";
  for (const ProfitLedgerRow& r : report.ledger) {
    ledger += join_csv({format_double(r.rho_o), std::to_string(r.replication),
                        r.policy});
    ledger += ',';
    ledger += ledger_csv_line(r.entry);
    ledger += '\n';
  }

  const fs::path rows_path = dir / "profit_rows.csv";
  const fs::path ledger_path = dir / "profit_ledger.csv";
  const fs::path summary_path = dir / "profit_summary.json";
  write_text_file(rows_path, rows);
  write_text_file(ledger_path, ledger);
  write_text_file(summary_path, report.summary.dump(2) + "\n");
  return {rows_path.string(), ledger_path.string(), summary_path.string()};
}

std::vector<std::string> write_margin_cdf_report(const MarginCdfReport& report,
                                                 const std::string& out_dir) {
  const fs::path dir = ensure_out_dir(out_dir);

  std::string rows = "rho_o,index,margin,cdf\n";
  for (const MarginCdfPoint& p : report.points) {
    rows += join_csv({format_double(p.rho_o), std::to_string(p.index),
                      format_double(p.margin), format_double(p.cdf)});
    rows += '\n';
  }

  const fs::path rows_path = dir / "margin_cdf.csv";
  const fs::path summary_path = dir / "margin_summary.json";
  write_text_file(rows_path, rows);
  write_text_file(summary_path, report.summary.dump(2) + "\n");
  return {rows_path.string(), summary_path.string()};
}

}  // namespace toksim
