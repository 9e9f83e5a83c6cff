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

// End-to-end acceptance gate. Nine checks, one PASS/FAIL line each, exit 0
// only when everything holds. Tolerances and budgets are pinned below; the
// randomized checks run on fixed seeds so a failure always reproduces.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "toksim/cli.hpp"
#include "toksim/config.hpp"
#include "toksim/economics.hpp"
#include "toksim/gadgets.hpp"
#include "toksim/graph.hpp"
#include "toksim/harness.hpp"
#include "toksim/lattice.hpp"
#include "toksim/money.hpp"
#include "toksim/oracles.hpp"
#include "toksim/policies.hpp"
#include "toksim/pricing.hpp"
#include "toksim/rng.hpp"
#include "toksim/sampling.hpp"
#include "toksim/sequence.hpp"
#include "toksim/stats.hpp"
#include "toksim/vocab.hpp"

using namespace toksim;
using toksim::testing::data_path;
using toksim::testing::random_string;
using toksim::testing::random_table_model;
using toksim::testing::random_vocab;
using toksim::testing::random_step_rule;
using toksim::testing::vab;

namespace {

constexpr double kTpcIdentityTol = 1e-9;
constexpr double kHardnessBudgetSeconds = 600.0;
constexpr double kIcBudgetSeconds = 60.0;
constexpr std::uint64_t kMasterSeed = 0x5eed5eed5eed5eedULL;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

struct Check {
  int number;
  std::string title;
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void note(const std::string& extra) {
    if (ok) detail = extra;
  }
  bool report() const {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": "
              << title;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n" << std::flush;
    return ok;
  }
};

std::string fmt_elapsed(double s) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(1);
  out << s << "s";
  return out.str();
}

// 1. The reduction gadget agrees with the brute-force path solver on every
//    small digraph, for all three rule variants.
bool criterion1() {
  Check c{1, "reduction agrees with the path solver on all small digraphs"};
  const auto t0 = std::chrono::steady_clock::now();
  const GadgetVariant variants[] = {GadgetVariant::kTopP, GadgetVariant::kTopK,
                                    GadgetVariant::kThreshold};
  std::uint64_t checked = 0;

  auto verify_all = [&](const DirectedGraph& g, const std::string& tag) {
    for (GadgetVariant v : variants) {
      const ReductionReport rep = verify_reduction(g, v);
      ++checked;
      if (!rep.agree) {
        c.fail(tag + " variant " + format_gadget_variant(v) +
               " disagreed: hamiltonian=" + (rep.hamiltonian ? "yes" : "no") +
               " longest_len=" + std::to_string(rep.longest_len));
      }
    }
  };

  for (std::uint64_t mask = 0; mask < (1ULL << 12); ++mask) {
    verify_all(DirectedGraph::from_edge_mask(4, mask),
               "n=4 mask=" + std::to_string(mask));
    if (!c.ok) break;
  }
  SplitMix64 rng(kMasterSeed);
  for (std::uint32_t n = 5; n <= 6 && c.ok; ++n) {
    const std::uint64_t span = 1ULL << DirectedGraph::ordered_pair_count(n);
    for (int i = 0; i < 500 && c.ok; ++i) {
      const std::uint64_t mask = rng.below(span);
      verify_all(DirectedGraph::from_edge_mask(n, mask),
                 "n=" + std::to_string(n) + " mask=" + std::to_string(mask));
    }
  }

  const double elapsed = seconds_since(t0);
  if (elapsed > kHardnessBudgetSeconds) {
    c.fail("exceeded the " + fmt_elapsed(kHardnessBudgetSeconds) +
           " budget: " + fmt_elapsed(elapsed));
  }
  c.note(std::to_string(checked) + " reductions, " + fmt_elapsed(elapsed));
  return c.report();
}

// 2. Exhaustive incentive compatibility to string length 8: character-based
//    mechanisms pass, per-token pricing yields a witness whenever the
//    vocabulary has a multi-character token.
bool criterion2() {
  Check c{2, "character pricing is incentive compatible, token pricing is not"};
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::uint32_t kMaxChars = 8;

  SplitMix64 rng(kMasterSeed + 2);
  std::vector<std::shared_ptr<const Vocabulary>> vocabs{vab()};
  while (vocabs.size() < 3) {
    auto v = random_vocab(rng);
    bool multi = false;
    for (TokenId id = 0; id < v->size(); ++id) {
      if (!v->is_eos(id) && v->char_count(id) > 1) multi = true;
    }
    if (multi) vocabs.push_back(std::move(v));
  }

  std::uint64_t sequences = 0;
  for (const auto& v : vocabs) {
    for (double r_c : {1.0, 0.7}) {
      const ICResult r =
          check_incentive_compatibility(PerCharPricing{r_c}, v, kMaxChars);
      sequences += r.sequences_checked;
      if (!r.compatible) c.fail("per-char pricing produced a witness");
    }
    for (int t = 0; t < 2; ++t) {
      CharTablePricing table;
      for (char32_t ch : v->alphabet()) {
        table.prices[ch] = 0.1 + 3.0 * rng.uniform01();
      }
      const ICResult r = check_incentive_compatibility(table, v, kMaxChars);
      sequences += r.sequences_checked;
      if (!r.compatible) c.fail("char-table pricing produced a witness");
    }
    const ICResult r =
        check_incentive_compatibility(PerTokenPricing{1.0}, v, kMaxChars);
    sequences += r.sequences_checked;
    if (r.compatible || !r.witness.has_value()) {
      c.fail("per-token pricing passed on a vocabulary with a multi-char token");
    } else {
      const ICWitness& w = *r.witness;
      if (w.a.render() != w.b.render() || w.price_a == w.price_b ||
          price(PerTokenPricing{1.0}, w.a) != w.price_a ||
          price(PerTokenPricing{1.0}, w.b) != w.price_b) {
        c.fail("per-token witness does not hold up");
      }
    }
  }

  const double elapsed = seconds_since(t0);
  if (elapsed > kIcBudgetSeconds) {
    c.fail("exceeded the " + fmt_elapsed(kIcBudgetSeconds) +
           " budget: " + fmt_elapsed(elapsed));
  }
  c.note("3 vocabularies, " + std::to_string(sequences) + " sequences, " +
         fmt_elapsed(elapsed));
  return c.report();
}

// 3. The greedy split heuristic never changes the string, never reports an
//    implausible modification, and never beats the exact oracle.
bool criterion3() {
  Check c{3, "split heuristic is sound and oracle-bounded"};
  SplitMix64 rng(kMasterSeed + 3);
  const Temperature temp{};
  std::uint64_t instances = 0, bruteforced = 0, modified = 0;

  while ((instances < 1000 || bruteforced < 200) && c.ok) {
    auto vocab = random_vocab(rng);
    auto model = random_table_model(vocab, rng);
    const SamplingRule rule = random_step_rule(rng, *vocab);
    const TokenSequence truth = sample_output(
        *model, rule, temp, 1 + rng.below(10), derive_stream(kMasterSeed, instances));
    if (truth.len() == 0) {
      // immediate end marker; nothing to misreport
      continue;
    }

    const std::uint32_t m = static_cast<std::uint32_t>(rng.below(4));
    const ReportOutcome outcome = apply_heuristic(truth, m, *model, rule, temp);
    ++instances;
    if (outcome.reported.render() != truth.render()) {
      c.fail("string changed on instance " + std::to_string(instances));
    }
    if (outcome.reported.len() != truth.len() + outcome.splits_applied) {
      c.fail("length bookkeeping broke on instance " +
             std::to_string(instances));
    }
    if (outcome.modified) {
      ++modified;
      if (!is_plausible(*model, outcome.reported, rule, temp)) {
        c.fail("implausible modified report on instance " +
               std::to_string(instances));
      }
    }
    if (bruteforced < 250 && truth.render().size() <= 8) {
      const LongestPlausibleResult oracle =
          longest_plausible(*model, truth.render(), rule, temp);
      ++bruteforced;
      if (!oracle.sequence.has_value()) {
        c.fail("oracle found a sampled output infeasible");
      } else if (outcome.reported.len() > oracle.sequence->len()) {
        c.fail("heuristic beat the oracle on instance " +
               std::to_string(instances));
      }
    }
  }

  c.note(std::to_string(instances) + " instances, " + std::to_string(modified) +
         " modified, " + std::to_string(bruteforced) + " oracle-checked");
  return c.report();
}

// 4. Random splitting grows the length by exactly the number of executed
//    splits, preserves the string, and fixes all-single-character inputs.
bool criterion4() {
  Check c{4, "random split contract holds on randomized inputs"};
  SplitMix64 rng(kMasterSeed + 4);
  std::uint64_t trials = 0, fixed_points = 0;

  while (trials < 1000 && c.ok) {
    auto vocab = random_vocab(rng);
    const std::string s = random_string(rng, *vocab, 12);
    if (s.empty()) continue;
    const TokenSequence seq = greedy_tokenize(vocab, s);
    const std::uint32_t m = static_cast<std::uint32_t>(rng.below(6));
    const std::uint64_t seed = rng.next();

    const ReportOutcome out = apply_random_split(seq, m, seed);
    ++trials;
    if (out.reported.render() != s) c.fail("string changed");
    if (out.reported.len() != seq.len() + out.splits_applied) {
      c.fail("length did not grow by the split count");
    }
    if (out.splits_applied > m || out.trace.size() != out.splits_applied) {
      c.fail("split trace inconsistent");
    }
    if (out.verification_charged) c.fail("random split charged verification");
    const ReportOutcome again = apply_random_split(seq, m, seed);
    if (again.reported.ids() != out.reported.ids()) {
      c.fail("same seed produced a different report");
    }

    const TokenSequence singles = single_char_tokenize(vocab, s);
    const ReportOutcome fp = apply_random_split(singles, 5, seed);
    if (fp.splits_applied != 0 || fp.modified ||
        fp.reported.ids() != singles.ids()) {
      c.fail("single-character sequence was not a fixed point");
    } else {
      ++fixed_points;
    }
  }

  c.note(std::to_string(trials) + " trials, " + std::to_string(fixed_points) +
         " fixed-point checks");
  return c.report();
}

// 5. Calibrating r_c = r_o * tpc transfers the per-token margin to per-char
//    billing exactly, evaluated on the calibration corpus itself.
bool criterion5() {
  Check c{5, "tpc calibration reproduces the target margin"};
  SplitMix64 rng(kMasterSeed + 5);
  double worst = 0.0;

  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    const std::size_t n = 1 + rng.below(40);
    std::vector<UsageRecord> corpus;
    for (std::size_t i = 0; i < n; ++i) {
      corpus.push_back({1 + rng.below(200), 1 + rng.below(400)});
    }
    const double c_o = 0.05 + 2.0 * rng.uniform01();
    const double r_o = c_o * (1.0 + 9.0 * rng.uniform01());
    const double rho_o = 1.0 - c_o / r_o;

    const TpcCalibration cal = calibrate_tpc(corpus, r_o);
    double sum = 0.0;
    for (const UsageRecord& rec : corpus) {
      const double revenue = cal.r_c * static_cast<double>(rec.chars);
      const double gen = c_o * static_cast<double>(rec.tokens);
      sum += margin(revenue, gen);
    }
    const double gap = std::fabs(sum / static_cast<double>(n) - rho_o);
    worst = std::max(worst, gap);
    if (gap > kTpcIdentityTol) {
      c.fail("margin identity off by " + format_double(gap) + " on corpus " +
             std::to_string(trial));
    }
  }

  c.note("50 corpora, worst gap " + format_double(worst));
  return c.report();
}

// 6. The measured utility gain changes sign where the analytic profitability
//    threshold says it must, at every swept margin outside the threshold's
//    confidence band.
bool criterion6() {
  Check c{6, "profit sweep matches the analytic profitability threshold"};
  ExperimentConfig cfg = ExperimentConfig::load(data_path("demo_config.toml"));
  cfg.policies = {"truthful", "heuristic:m=1,rule=topp:0.9,T=1.0"};
  cfg.replications = 6;
  cfg.c_o = 0.5;
  cfg.c_v = 2.0;

  // probe the acceptance rate, then place the threshold at rho = 0.5
  const ProfitReport probe =
      run_profit_sweep(ExperimentContext::load(cfg), {0.5});
  const double e_mean = mean(probe.e_hat_per_rep);
  if (!(e_mean > 0.0)) {
    // nothing ever sticks: gains are pure verification losses
    bool all_negative = true;
    for (const ProfitRow& row : probe.rows) {
      all_negative = all_negative && row.mean_gain_abs < 0.0;
    }
    if (!all_negative) c.fail("zero acceptance rate but non-negative gain");
    c.note("degenerate acceptance rate 0, losses only");
    return c.report();
  }

  cfg.c_v = 2.0 * e_mean * 1.0 * cfg.c_o;
  const ExperimentContext ctx = ExperimentContext::load(cfg);
  const CostModel costs{cfg.c_o, cfg.c_v};
  const std::vector<double> margins = {0.1, 0.3, 0.7, 0.9};
  const ProfitReport report = run_profit_sweep(ctx, margins);

  // the confidence band the sweep itself reports: threshold evaluated at the
  // acceptance rate's interval endpoints
  const double e_bar = mean(report.e_hat_per_rep);
  const double hw = ci_half_width(report.e_hat_per_rep, cfg.confidence);
  const double e_lo = std::max(0.0, e_bar - hw);
  const double e_hi = std::min(1.0, e_bar + hw);
  const double rho_star = profitability_margin_threshold(e_bar, 1, costs);
  const double band_lo = profitability_margin_threshold(e_hi, 1, costs);
  const double band_hi = profitability_margin_threshold(e_lo, 1, costs);
  const auto& thr = report.summary.at("analytic_threshold");
  if (std::fabs(thr.at("rho_star").get<double>() - rho_star) > 1e-12 ||
      std::fabs(thr.at("rho_star_low").get<double>() - band_lo) > 1e-12 ||
      std::fabs(thr.at("rho_star_high").get<double>() - band_hi) > 1e-12) {
    c.fail("reported threshold band disagrees with the direct computation");
  }

  int below = 0, above = 0;
  for (double rho : margins) {
    std::vector<double> gains;
    for (const ProfitRow& row : report.rows) {
      if (row.rho_o == rho) gains.push_back(row.mean_gain_abs);
    }
    const double gain = mean(gains);
    if (rho >= band_lo && rho <= band_hi) continue;
    if (rho < rho_star) {
      ++below;
      if (!(gain < 0.0)) {
        c.fail("positive gain at rho=" + format_double(rho) +
               " below the threshold " + format_double(rho_star));
      }
    } else {
      ++above;
      if (!(gain > 0.0)) {
        c.fail("negative gain at rho=" + format_double(rho) +
               " above the threshold " + format_double(rho_star));
      }
    }
  }
  if (below == 0 || above == 0) {
    c.fail("swept margins do not straddle the threshold " +
           format_double(rho_star));
  }

  c.note("acceptance rate " + format_double(e_bar) + ", threshold " +
         format_double(rho_star) + ", " + std::to_string(below) + " below / " +
         std::to_string(above) + " above");
  return c.report();
}

// 7. Splitting a 2-token output into a string-equal 4-token report doubles
//    per-token revenue and cannot move per-character revenue at all.
bool criterion7() {
  Check c{7, "token inflation doubles per-token revenue, never per-char"};
  const auto v = vab();
  const struct {
    std::vector<TokenId> two;
    std::vector<TokenId> four;
  } pairs[] = {
      {{4, 3}, {2, 1, 0, 1}},  // aabab
      {{2, 2}, {0, 0, 0, 0}},  // aaaa
  };

  for (const auto& p : pairs) {
    const TokenSequence truth(v, p.two);
    const TokenSequence inflated(v, p.four);
    if (truth.render() != inflated.render()) {
      c.fail("report is not string-equal to the truth");
      continue;
    }
    for (double r_o : {1.0, 0.7, 2.0, 0.123456}) {
      const PerTokenPricing mech{r_o};
      if (price(mech, inflated) != 2.0 * price(mech, truth)) {
        c.fail("per-token revenue did not exactly double at r_o=" +
               format_double(r_o));
      }
    }
    for (double r_c : {1.0, 0.35, 2.5}) {
      const PerCharPricing mech{r_c};
      if (price(mech, inflated) != price(mech, truth)) {
        c.fail("per-char revenue moved at r_c=" + format_double(r_c));
      }
    }
  }

  c.note("2 sequence pairs, 4 token prices, 3 char prices");
  return c.report();
}

// 8. Lattice counting matches enumeration, and the revenue oracle under
//    per-token pricing always lands on the all-single-character tokenization.
bool criterion8() {
  Check c{8, "lattice count matches enumeration, max revenue maxes length"};
  SplitMix64 rng(kMasterSeed + 8);
  std::uint64_t instances = 0, tokenizations = 0;

  while (instances < 200 && c.ok) {
    auto vocab = random_vocab(rng);
    const std::string s = random_string(rng, *vocab, 12);
    if (s.empty()) continue;
    ++instances;

    const std::uint64_t counted = count_tokenizations(*vocab, s);
    const auto enumerated = all_tokenizations(vocab, s);
    tokenizations += counted;
    if (counted != enumerated.size()) {
      c.fail("count " + std::to_string(counted) + " != enumerated " +
             std::to_string(enumerated.size()) + " on \"" + s + "\"");
    }

    const double r_o = 0.5 + 2.0 * rng.uniform01();
    const MaxRevenueResult best =
        max_revenue_tokenization(vocab, PerTokenPricing{r_o}, s);
    const TokenSequence singles = single_char_tokenize(vocab, s);
    if (best.sequence.ids() != singles.ids()) {
      c.fail("max revenue tokenization is not all single characters on \"" + s +
             "\"");
    }
  }

  c.note("200 instances, " + std::to_string(tokenizations) + " tokenizations");
  return c.report();
}

// 9. simulate is bit-deterministic: same bytes for a rerun and for a
//    parallel run.
bool criterion9() {
  Check c{9, "simulate output is byte-identical across runs and thread counts"};
  toksim::testing::ScratchDir tmp("acceptance");

  auto simulate = [&](const std::string& sub, const std::string& threads) {
    std::ostringstream out, err;
    const int code = run_cli({"simulate", "--config", data_path("demo_config.toml"),
                              "--out", tmp.file(sub), "--threads", threads},
                             out, err);
    std::vector<std::string> files;
    std::istringstream lines(out.str());
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("wrote ", 0) == 0) files.push_back(line.substr(6));
    }
    if (code != 0) {
      c.fail("simulate exited with " + std::to_string(code) + ": " + err.str());
      files.clear();
    }
    return files;
  };

  const auto a = simulate("a", "1");
  const auto b = simulate("b", "1");
  const auto d = simulate("d", "4");
  if (c.ok && (a.size() != 8 || b.size() != 8 || d.size() != 8)) {
    c.fail("expected 8 report files, got " + std::to_string(a.size()) + "/" +
           std::to_string(b.size()) + "/" + std::to_string(d.size()));
  }
  std::uint64_t bytes = 0;
  for (std::size_t i = 0; c.ok && i < a.size(); ++i) {
    const std::string want = toksim::testing::read_file(a[i]);
    bytes += want.size();
    if (want.empty()) c.fail(a[i] + " is empty");
    if (want != toksim::testing::read_file(b[i])) {
      c.fail("rerun changed " + b[i]);
    }
    if (want != toksim::testing::read_file(d[i])) {
      c.fail("4-thread run changed " + d[i]);
    }
  }

  c.note("3 runs, 8 files, " + std::to_string(bytes) + " bytes compared");
  return c.report();
}

}  // namespace

int main() {
  bool all = true;
  all &= criterion1();
  all &= criterion2();
  all &= criterion3();
  all &= criterion4();
  all &= criterion5();
  all &= criterion6();
  all &= criterion7();
  all &= criterion8();
  all &= criterion9();
  std::cout << (all ? "all 9 criteria passed" : "ACCEPTANCE FAILED") << "\n";
  return all ? 0 : 1;
}
