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

#include "toksim/cli.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "toksim/config.hpp"
#include "toksim/economics.hpp"
#include "toksim/errors.hpp"
#include "toksim/gadgets.hpp"
#include "toksim/graph.hpp"
#include "toksim/harness.hpp"
#include "toksim/lattice.hpp"
#include "toksim/model.hpp"
#include "toksim/money.hpp"
#include "toksim/oracles.hpp"
#include "toksim/policies.hpp"
#include "toksim/pricing.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"
#include "toksim/vocab.hpp"

namespace toksim {
namespace {

using nlohmann::ordered_json;

std::string join_ids(const std::vector<TokenId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

// Model selection flags shared by the commands that audit or misreport.
struct ModelFlags {
  std::string table;
  std::string ngram;
  int order = 2;
  double alpha = 1.0;
};

void add_model_flags(CLI::App* sub, ModelFlags* mf) {
  sub->add_option("--table", mf->table, "conditional table model (JSON)");
  sub->add_option("--ngram", mf->ngram, "token corpus to train an n-gram model");
  sub->add_option("--order", mf->order, "n-gram order (with --ngram)")
      ->capture_default_str();
  sub->add_option("--alpha", mf->alpha, "n-gram smoothing (with --ngram)")
      ->capture_default_str();
}

std::shared_ptr<const GenerativeModel> load_model(
    const std::shared_ptr<const Vocabulary>& vocab, const ModelFlags& mf,
    bool required) {
  if (!mf.table.empty() && !mf.ngram.empty()) {
    throw UsageError("--table and --ngram are mutually exclusive");
  }
  if (!mf.table.empty()) return TableModel::from_file(vocab, mf.table);
  if (!mf.ngram.empty()) {
    if (mf.order < 1) throw UsageError("--order must be >= 1");
    if (!(mf.alpha > 0.0)) throw UsageError("--alpha must be > 0");
    return NgramModel::from_corpus_file(
        vocab, mf.ngram, static_cast<std::uint32_t>(mf.order), mf.alpha);
  }
  if (required) {
    throw UsageError("this command needs a model: pass --table or --ngram");
  }
  return nullptr;
}

// Exactly one of --ids / --string selects the input sequence; a string is
// tokenized by longest match.
TokenSequence input_sequence(const std::shared_ptr<const Vocabulary>& vocab,
                             const std::string& ids, const std::string& str) {
  if (ids.empty() == str.empty()) {
    throw UsageError("pass exactly one of --ids or --string");
  }
  if (!ids.empty()) return TokenSequence(vocab, parse_id_list(ids));
  return greedy_tokenize(vocab, str);
}

std::vector<UsageRecord> load_usage_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open usage file: " + path);
  std::vector<UsageRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.find_first_not_of("0123456789,") != std::string::npos) {
      continue;  // header row
    }
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    UsageRecord rec{};
    std::string extra;
    if (!(ss >> rec.tokens >> rec.chars) || (ss >> extra)) {
      throw UsageError("usage file line " + std::to_string(line_no) +
                       ": expected 'tokens,chars'");
    }
    records.push_back(rec);
  }
  return records;
}

// Per-invocation state: globals plus the storage every subcommand parses
// into. Dispatch happens after CLI11 succeeds.
struct Invocation {
  // globals
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "text";

  // tokenize
  std::string tok_vocab, tok_string, tok_mode = "greedy";
  std::uint64_t tok_limit = 100000;

  // misreport
  std::string mis_vocab, mis_policy, mis_ids, mis_string;
  ModelFlags mis_model;

  // audit
  std::string aud_vocab, aud_rule, aud_ids, aud_string;
  double aud_temp = 1.0;
  ModelFlags aud_model;

  // price
  std::string price_vocab, price_mech, price_ids, price_string;

  // ic-check
  std::string ic_vocab, ic_mech;
  std::uint32_t ic_max_len = 6;

  // calibrate-tpc
  std::string cal_usage;
  double cal_r_o = 1.0;

  // oracle
  std::string ora_kind, ora_vocab, ora_string, ora_rule, ora_mech;
  double ora_temp = 1.0;
  ModelFlags ora_model;
  OracleBudget ora_budget;

  // hardness
  std::string hard_graph, hard_variant;
  double hard_eta = 1e-6;
  std::optional<double> hard_delta;
  OracleBudget hard_budget;
  std::string gap_graph;
  std::optional<double> gap_delta;

  // simulate
  std::string sim_sweep = "all";
  int sim_threads = 0;  // 0 keeps the config value
};

void emit(const ordered_json& doc, const std::string& format,
          const std::vector<std::string>& text_lines, std::ostream& out) {
  if (format == "json") {
    out << doc.dump(2) << "\n";
    return;
  }
  for (const auto& line : text_lines) out << line << "\n";
}

int cmd_tokenize(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.tok_vocab);
  ordered_json doc;
  doc["mode"] = inv.tok_mode;
  std::vector<std::string> lines;

  if (inv.tok_mode == "greedy") {
    TokenSequence seq = greedy_tokenize(vocab, inv.tok_string);
    doc["ids"] = seq.ids();
    if (inv.format == "csv") {
      lines = {"ids", join_ids(seq.ids())};
    } else {
      lines = {join_ids(seq.ids())};
    }
  } else if (inv.tok_mode == "count") {
    std::uint64_t n = count_tokenizations(*vocab, inv.tok_string);
    doc["count"] = n;
    if (inv.format == "csv") {
      lines = {"count", std::to_string(n)};
    } else {
      lines = {std::to_string(n)};
    }
  } else if (inv.tok_mode == "enumerate") {
    auto seqs = all_tokenizations(vocab, inv.tok_string, inv.tok_limit);
    doc["tokenizations"] = ordered_json::array();
    if (inv.format == "csv") lines.push_back("ids");
    for (const auto& seq : seqs) {
      doc["tokenizations"].push_back(seq.ids());
      lines.push_back(join_ids(seq.ids()));
    }
  } else {
    throw UsageError("--mode must be greedy, enumerate or count");
  }
  emit(doc, inv.format, lines, out);
  return kExitOk;
}

int cmd_misreport(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.mis_vocab);
  ReportingPolicy policy = parse_policy(inv.mis_policy);
  bool needs_model = std::holds_alternative<HeuristicPolicy>(policy);
  auto model = load_model(vocab, inv.mis_model, needs_model);
  TokenSequence seq = input_sequence(vocab, inv.mis_ids, inv.mis_string);

  ReportOutcome outcome = apply_policy(policy, seq, model.get());

  ordered_json doc;
  doc["policy"] = format_policy(policy);
  doc["true_ids"] = seq.ids();
  doc["reported_ids"] = outcome.reported.ids();
  doc["splits_applied"] = outcome.splits_applied;
  doc["modified"] = outcome.modified;
  if (outcome.candidate_plausible.has_value()) {
    doc["candidate_plausible"] = *outcome.candidate_plausible;
  }
  doc["verification_charged"] = outcome.verification_charged;
  doc["trace"] = ordered_json::array();

  std::vector<std::string> lines;
  lines.push_back("policy: " + format_policy(policy));
  lines.push_back("true_ids: " + join_ids(seq.ids()));
  lines.push_back("reported_ids: " + join_ids(outcome.reported.ids()));
  lines.push_back("splits_applied: " + std::to_string(outcome.splits_applied));
  lines.push_back(std::string("modified: ") +
                  (outcome.modified ? "true" : "false"));
  if (outcome.candidate_plausible.has_value()) {
    lines.push_back(std::string("candidate_plausible: ") +
                    (*outcome.candidate_plausible ? "true" : "false"));
  }
  lines.push_back(std::string("verification_charged: ") +
                  (outcome.verification_charged ? "true" : "false"));
  for (const SplitEvent& ev : outcome.trace) {
    ordered_json e;
    e["iteration"] = ev.iteration;
    e["pos"] = ev.pos;
    e["original"] = ev.original;
    e["left"] = ev.left;
    e["right"] = ev.right;
    doc["trace"].push_back(std::move(e));
    lines.push_back("trace: iter=" + std::to_string(ev.iteration) + " pos=" +
                    std::to_string(ev.pos) + " " + std::to_string(ev.original) +
                    " -> " + std::to_string(ev.left) + " " +
                    std::to_string(ev.right));
  }
  emit(doc, inv.format, lines, out);
  return kExitOk;
}

int cmd_audit(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.aud_vocab);
  auto model = load_model(vocab, inv.aud_model, /*required=*/true);
  SamplingRule rule = parse_rule(inv.aud_rule);
  Temperature temp{inv.aud_temp};
  TokenSequence seq = input_sequence(vocab, inv.aud_ids, inv.aud_string);

  bool plausible = is_plausible(*model, seq, rule, temp);
  double prob = sequence_prob(*model, seq, temp);

  ordered_json doc;
  doc["rule"] = format_rule(rule);
  doc["plausible"] = plausible;
  doc["sequence_prob"] = prob;
  emit(doc, inv.format,
       {std::string("plausible: ") + (plausible ? "true" : "false"),
        "sequence_prob: " + format_double(prob)},
       out);
  return kExitOk;
}

int cmd_price(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.price_vocab);
  PricingMechanism mech = parse_mechanism(inv.price_mech);
  TokenSequence seq = input_sequence(vocab, inv.price_ids, inv.price_string);
  double p = price(mech, seq);

  ordered_json doc;
  doc["mechanism"] = format_mechanism(mech);
  doc["len"] = seq.len();
  doc["chars"] = seq.char_count();
  doc["price"] = p;
  emit(doc, inv.format,
       {"len: " + std::to_string(seq.len()),
        "chars: " + std::to_string(seq.char_count()),
        "price: " + format_money(p)},
       out);
  return kExitOk;
}

int cmd_ic_check(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.ic_vocab);
  PricingMechanism mech = parse_mechanism(inv.ic_mech);
  ICResult result = check_incentive_compatibility(mech, vocab, inv.ic_max_len);

  ordered_json doc;
  doc["mechanism"] = format_mechanism(mech);
  doc["max_len"] = inv.ic_max_len;
  doc["compatible"] = result.compatible;
  doc["strings_checked"] = result.strings_checked;
  doc["sequences_checked"] = result.sequences_checked;
  std::vector<std::string> lines;
  lines.push_back(std::string("compatible: ") +
                  (result.compatible ? "true" : "false"));
  if (result.witness.has_value()) {
    const ICWitness& w = *result.witness;
    doc["witness"]["ids_a"] = w.a.ids();
    doc["witness"]["ids_b"] = w.b.ids();
    doc["witness"]["price_a"] = w.price_a;
    doc["witness"]["price_b"] = w.price_b;
    lines.push_back("witness_ids_a: " + join_ids(w.a.ids()));
    lines.push_back("witness_ids_b: " + join_ids(w.b.ids()));
    lines.push_back("witness_string: " + w.a.render());
    lines.push_back("price_a: " + format_money(w.price_a));
    lines.push_back("price_b: " + format_money(w.price_b));
  }
  lines.push_back("strings_checked: " + std::to_string(result.strings_checked));
  lines.push_back("sequences_checked: " +
                  std::to_string(result.sequences_checked));
  emit(doc, inv.format, lines, out);
  return kExitOk;
}

int cmd_calibrate_tpc(const Invocation& inv, std::ostream& out) {
  std::vector<UsageRecord> records = load_usage_csv(inv.cal_usage);
  TpcCalibration cal = calibrate_tpc(records, inv.cal_r_o);

  ordered_json doc;
  doc["n_records"] = records.size();
  doc["r_o"] = inv.cal_r_o;
  doc["tpc"] = cal.tpc;
  doc["r_c"] = cal.r_c;
  emit(doc, inv.format,
       {"n_records: " + std::to_string(records.size()),
        "tpc: " + format_double(cal.tpc), "r_c: " + format_double(cal.r_c)},
       out);
  return kExitOk;
}

int cmd_oracle(const Invocation& inv, std::ostream& out) {
  auto vocab = Vocabulary::from_file(inv.ora_vocab);
  ordered_json doc;
  doc["kind"] = inv.ora_kind;
  std::vector<std::string> lines;

  if (inv.ora_kind == "longest-plausible") {
    if (inv.ora_rule.empty()) {
      throw UsageError("longest-plausible needs --rule");
    }
    auto model = load_model(vocab, inv.ora_model, /*required=*/true);
    SamplingRule rule = parse_rule(inv.ora_rule);
    LongestPlausibleResult result = longest_plausible(
        *model, inv.ora_string, rule, Temperature{inv.ora_temp}, inv.ora_budget);
    doc["feasible"] = result.sequence.has_value();
    doc["nodes_explored"] = result.nodes_explored;
    lines.push_back(std::string("feasible: ") +
                    (result.sequence.has_value() ? "true" : "false"));
    if (result.sequence.has_value()) {
      doc["length"] = result.sequence->len();
      doc["ids"] = result.sequence->ids();
      lines.push_back("length: " + std::to_string(result.sequence->len()));
      lines.push_back("ids: " + join_ids(result.sequence->ids()));
    }
    lines.push_back("nodes_explored: " + std::to_string(result.nodes_explored));
  } else if (inv.ora_kind == "max-revenue") {
    if (inv.ora_mech.empty()) throw UsageError("max-revenue needs --mechanism");
    PricingMechanism mech = parse_mechanism(inv.ora_mech);
    MaxRevenueResult result =
        max_revenue_tokenization(vocab, mech, inv.ora_string, inv.ora_budget);
    doc["revenue"] = result.revenue;
    doc["ids"] = result.sequence.ids();
    doc["nodes_explored"] = result.nodes_explored;
    lines.push_back("revenue: " + format_money(result.revenue));
    lines.push_back("ids: " + join_ids(result.sequence.ids()));
    lines.push_back("nodes_explored: " + std::to_string(result.nodes_explored));
  } else {
    throw UsageError("--kind must be longest-plausible or max-revenue");
  }
  emit(doc, inv.format, lines, out);
  return kExitOk;
}

int cmd_hardness_verify(const Invocation& inv, std::ostream& out) {
  DirectedGraph graph = DirectedGraph::from_file(inv.hard_graph);
  GadgetVariant variant = parse_gadget_variant(inv.hard_variant);
  GadgetParams params;
  params.eta = inv.hard_eta;
  params.delta = inv.hard_delta;
  ReductionReport report =
      verify_reduction(graph, variant, inv.hard_budget, params);

  ordered_json doc;
  doc["variant"] = format_gadget_variant(variant);
  doc["n"] = graph.node_count();
  doc["hamiltonian"] = report.hamiltonian;
  doc["feasible"] = report.feasible;
  doc["longest_len"] = report.longest_len;
  doc["agree"] = report.agree;
  doc["nodes_explored"] = report.nodes_explored;
  emit(doc, inv.format,
       {"variant: " + format_gadget_variant(variant),
        "n: " + std::to_string(graph.node_count()),
        std::string("hamiltonian: ") + (report.hamiltonian ? "true" : "false"),
        std::string("feasible: ") + (report.feasible ? "true" : "false"),
        "longest_len: " + std::to_string(report.longest_len),
        std::string("agree: ") + (report.agree ? "true" : "false"),
        "nodes_explored: " + std::to_string(report.nodes_explored)},
       out);
  return kExitOk;
}

int cmd_hardness_gap(const Invocation& inv, std::ostream& out) {
  DirectedGraph graph = DirectedGraph::from_file(inv.gap_graph);
  double delta = inv.gap_delta.has_value() ? *inv.gap_delta
                                           : default_delta(graph.node_count());
  GapReport report = threshold_gap_check(graph, delta, inv.hard_budget);

  ordered_json doc;
  doc["n"] = graph.node_count();
  doc["delta"] = delta;
  doc["epsilon"] = report.epsilon;
  doc["full_length_count"] = report.full_length_count;
  doc["hamiltonian_count"] = report.hamiltonian_count;
  doc["min_hamiltonian_prob"] = report.min_hamiltonian_prob;
  doc["max_hamiltonian_prob"] = report.max_hamiltonian_prob;
  doc["max_non_hamiltonian_prob"] = report.max_non_hamiltonian_prob;
  doc["separated"] = report.separated;
  emit(doc, inv.format,
       {"n: " + std::to_string(graph.node_count()),
        "delta: " + format_double(delta),
        "epsilon: " + format_double(report.epsilon),
        "full_length_count: " + std::to_string(report.full_length_count),
        "hamiltonian_count: " + std::to_string(report.hamiltonian_count),
        "min_hamiltonian_prob: " + format_double(report.min_hamiltonian_prob),
        "max_hamiltonian_prob: " + format_double(report.max_hamiltonian_prob),
        "max_non_hamiltonian_prob: " +
            format_double(report.max_non_hamiltonian_prob),
        std::string("separated: ") + (report.separated ? "true" : "false")},
       out);
  return kExitOk;
}

int cmd_simulate(const Invocation& inv, bool seed_given, std::ostream& out) {
  if (inv.config_path.empty()) throw UsageError("simulate needs --config");
  ExperimentConfig cfg = ExperimentConfig::load(inv.config_path);
  if (seed_given) cfg.seed = inv.seed;
  if (!inv.out_dir.empty()) cfg.out_dir = inv.out_dir;
  if (inv.sim_threads > 0) cfg.threads = inv.sim_threads;

  ExperimentContext ctx = ExperimentContext::load(cfg);
  const bool all = inv.sim_sweep == "all";
  std::vector<std::string> written;

  if (inv.sim_sweep == "overcharge" || (all && !cfg.m_values.empty())) {
    OverchargeReport report = run_overcharge_sweep(ctx, cfg.m_values);
    auto files = write_overcharge_report(report, cfg.out_dir);
    written.insert(written.end(), files.begin(), files.end());
  }
  if (inv.sim_sweep == "profit" || (all && !cfg.margins.empty())) {
    ProfitReport report = run_profit_sweep(ctx, cfg.margins);
    auto files = write_profit_report(report, cfg.out_dir);
    written.insert(written.end(), files.begin(), files.end());
  }
  if (inv.sim_sweep == "margin-cdf" || (all && !cfg.rho_values.empty())) {
    MarginCdfReport report = run_margin_cdf(ctx, cfg.rho_values);
    auto files = write_margin_cdf_report(report, cfg.out_dir);
    written.insert(written.end(), files.begin(), files.end());
  }
  if (written.empty()) {
    throw UsageError(
        "nothing to simulate: the config declares no m_values, margins or "
        "rho_values");
  }
  for (const auto& path : written) out << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  Invocation inv;
  CLI::App app{"tokenization economics workbench"};
  app.require_subcommand(1);

  app.add_option("--config", inv.config_path, "experiment config (TOML/JSON)");
  auto* seed_opt =
      app.add_option("--seed", inv.seed, "master seed override for simulate");
  app.add_option("--out", inv.out_dir, "output directory override");
  app.add_option("--format", inv.format, "output format")
      ->check(CLI::IsMember({"text", "csv", "json"}))
      ->capture_default_str();

  auto* tok = app.add_subcommand("tokenize", "tokenize a string");
  tok->fallthrough();
  tok->add_option("--vocab", inv.tok_vocab, "vocabulary JSON")->required();
  tok->add_option("--string", inv.tok_string, "input string")->required();
  tok->add_option("--mode", inv.tok_mode, "greedy | enumerate | count")
      ->check(CLI::IsMember({"greedy", "enumerate", "count"}))
      ->capture_default_str();
  tok->add_option("--limit", inv.tok_limit, "max tokenizations to enumerate")
      ->capture_default_str();

  auto* mis = app.add_subcommand("misreport", "apply a reporting policy");
  mis->fallthrough();
  mis->add_option("--vocab", inv.mis_vocab, "vocabulary JSON")->required();
  mis->add_option("--policy", inv.mis_policy, "policy spec string")->required();
  mis->add_option("--ids", inv.mis_ids, "input as space separated token ids");
  mis->add_option("--string", inv.mis_string, "input as a string (greedy)");
  add_model_flags(mis, &inv.mis_model);

  auto* aud = app.add_subcommand("audit", "plausibility check a sequence");
  aud->fallthrough();
  aud->add_option("--vocab", inv.aud_vocab, "vocabulary JSON")->required();
  aud->add_option("--rule", inv.aud_rule, "sampling rule spec")->required();
  aud->add_option("--temp", inv.aud_temp, "temperature")->capture_default_str();
  aud->add_option("--ids", inv.aud_ids, "input as space separated token ids");
  aud->add_option("--string", inv.aud_string, "input as a string (greedy)");
  add_model_flags(aud, &inv.aud_model);

  auto* pr = app.add_subcommand("price", "price a sequence");
  pr->fallthrough();
  pr->add_option("--vocab", inv.price_vocab, "vocabulary JSON")->required();
  pr->add_option("--mechanism", inv.price_mech, "mechanism spec")->required();
  pr->add_option("--ids", inv.price_ids, "input as space separated token ids");
  pr->add_option("--string", inv.price_string, "input as a string (greedy)");

  auto* ic = app.add_subcommand("ic-check",
                                "exhaustive incentive compatibility check");
  ic->fallthrough();
  ic->add_option("--vocab", inv.ic_vocab, "vocabulary JSON")->required();
  ic->add_option("--mechanism", inv.ic_mech, "mechanism spec")->required();
  ic->add_option("--max-len", inv.ic_max_len, "max string length in chars")
      ->capture_default_str();

  auto* cal = app.add_subcommand("calibrate-tpc",
                                 "per-character tariff from a usage corpus");
  cal->fallthrough();
  cal->add_option("--usage", inv.cal_usage, "usage CSV (tokens,chars)")
      ->required();
  cal->add_option("--r-o", inv.cal_r_o, "per-token price to match")->required();

  auto* ora = app.add_subcommand("oracle", "exact search oracles");
  ora->fallthrough();
  ora->add_option("--kind", inv.ora_kind, "longest-plausible | max-revenue")
      ->required();
  ora->add_option("--vocab", inv.ora_vocab, "vocabulary JSON")->required();
  ora->add_option("--string", inv.ora_string, "target string")->required();
  ora->add_option("--rule", inv.ora_rule, "sampling rule (longest-plausible)");
  ora->add_option("--temp", inv.ora_temp, "temperature")->capture_default_str();
  ora->add_option("--mechanism", inv.ora_mech, "mechanism (max-revenue)");
  ora->add_option("--max-nodes", inv.ora_budget.max_nodes, "search node budget")
      ->capture_default_str();
  ora->add_option("--max-seconds", inv.ora_budget.max_seconds,
                  "wall clock budget")
      ->capture_default_str();
  add_model_flags(ora, &inv.ora_model);

  auto* hard = app.add_subcommand("hardness", "reduction gadget tooling");
  hard->fallthrough();
  hard->require_subcommand(1);
  auto* hv = hard->add_subcommand("verify",
                                  "run both sides of the reduction and compare");
  hv->fallthrough();
  hv->add_option("--graph", inv.hard_graph, "digraph file")->required();
  hv->add_option("--variant", inv.hard_variant, "topp | topk | thresh")
      ->required();
  hv->add_option("--eta", inv.hard_eta, "off-set probability mass (0 = exact)")
      ->capture_default_str();
  hv->add_option("--delta", inv.hard_delta,
                 "threshold step-out probability (default: safe bound)");
  hv->add_option("--max-nodes", inv.hard_budget.max_nodes, "search node budget")
      ->capture_default_str();
  hv->add_option("--max-seconds", inv.hard_budget.max_seconds,
                 "wall clock budget")
      ->capture_default_str();
  auto* hg = hard->add_subcommand(
      "gap", "audit the threshold probability gap on full-length tokenizations");
  hg->fallthrough();
  hg->add_option("--graph", inv.gap_graph, "digraph file")->required();
  hg->add_option("--delta", inv.gap_delta,
                 "threshold step-out probability (default: safe bound)");
  hg->add_option("--max-nodes", inv.hard_budget.max_nodes, "search node budget")
      ->capture_default_str();
  hg->add_option("--max-seconds", inv.hard_budget.max_seconds,
                 "wall clock budget")
      ->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "run configured sweeps");
  sim->fallthrough();
  sim->add_option("--sweep", inv.sim_sweep,
                  "overcharge | profit | margin-cdf | all")
      ->check(CLI::IsMember({"overcharge", "profit", "margin-cdf", "all"}))
      ->capture_default_str();
  sim->add_option("--threads", inv.sim_threads, "worker thread override");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (tok->parsed()) return cmd_tokenize(inv, out);
    if (mis->parsed()) return cmd_misreport(inv, out);
    if (aud->parsed()) return cmd_audit(inv, out);
    if (pr->parsed()) return cmd_price(inv, out);
    if (ic->parsed()) return cmd_ic_check(inv, out);
    if (cal->parsed()) return cmd_calibrate_tpc(inv, out);
    if (ora->parsed()) return cmd_oracle(inv, out);
    if (hard->parsed()) {
      if (hv->parsed()) return cmd_hardness_verify(inv, out);
      if (hg->parsed()) return cmd_hardness_gap(inv, out);
      throw UsageError("hardness needs a subcommand: verify or gap");
    }
    if (sim->parsed()) return cmd_simulate(inv, seed_opt->count() > 0, out);
    throw UsageError("no subcommand given");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace toksim
