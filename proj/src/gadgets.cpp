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

#include "toksim/gadgets.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "toksim/errors.hpp"

namespace toksim {

GadgetVariant parse_gadget_variant(const std::string& text) {
  if (text == "topp") return GadgetVariant::kTopP;
  if (text == "topk") return GadgetVariant::kTopK;
  if (text == "thresh") return GadgetVariant::kThreshold;
  throw UsageError("unknown gadget variant: '" + text + "'");
}

std::string format_gadget_variant(GadgetVariant v) {
  switch (v) {
    case GadgetVariant::kTopP:
      return "topp";
    case GadgetVariant::kTopK:
      return "topk";
    case GadgetVariant::kThreshold:
      return "thresh";
  }
  throw UsageError("bad gadget variant");
}

namespace {

std::shared_ptr<const Vocabulary> make_gadget_vocab(std::uint32_t n,
                                                    bool with_padding) {
  std::vector<std::string> alphabet{"a"};
  std::vector<std::string> tokens;
  for (std::uint32_t j = 1; j <= n; ++j) {
    tokens.push_back(std::string(j, 'a'));
  }
  const std::uint64_t lambda = std::uint64_t{n} * (n + 1) / 2;
  tokens.push_back(std::string(lambda, 'a'));
  if (with_padding) {
    alphabet.push_back("b");
    for (std::uint32_t j = 1; j <= n; ++j) {
      tokens.push_back(std::string(j, 'b'));
    }
  }
  return std::make_shared<const Vocabulary>(alphabet, tokens, true);
}

}  // namespace

GadgetModel::GadgetModel(const DirectedGraph& g, GadgetVariant variant,
                         double eta, double delta)
    : graph_(g),
      variant_(variant),
      eta_(eta),
      delta_(delta),
      n_(g.node_count()),
      lambda_(std::uint64_t{n_} * (n_ + 1) / 2),
      vocab_(make_gadget_vocab(n_, variant == GadgetVariant::kTopK)) {
  if (n_ < 2) throw UsageError("gadget graphs need at least two nodes");
  if (variant_ != GadgetVariant::kThreshold) {
    if (eta_ < 0.0 || eta_ * (n_ + 2.0) >= 0.5) {
      throw UsageError("gadget eta out of range");
    }
  } else {
    if (!(delta_ > 0.0) || !(delta_ < 1.0 / (n_ + 1.0))) {
      throw UsageError("gadget delta must be in (0, 1/(n+1))");
    }
  }
}

std::vector<TokenId> GadgetModel::core_allowed(
    std::span<const TokenId> prefix) const {
  const TokenId eos = vocab_->eos_id();
  std::uint64_t chars = 0;
  for (TokenId id : prefix) chars += vocab_->char_count(id);
  if (chars >= lambda_) return {eos};
  if (prefix.empty()) {
    // every core token except EOS: all node tokens plus the lambda token
    std::vector<TokenId> out;
    for (TokenId id = 0; id <= n_; ++id) out.push_back(id);
    return out;
  }
  const TokenId last = prefix.back();
  std::vector<TokenId> out;
  if (last < n_) {
    std::set<std::uint32_t> visited;
    for (TokenId id : prefix) {
      if (id < n_) visited.insert(id + 1);
    }
    for (std::uint32_t v : graph_.successors(last + 1)) {
      if (!visited.count(v)) out.push_back(node_token(v));
    }
  }
  // last token was the lambda token or a filler: no walk to continue
  out.push_back(eos);
  return out;
}

std::vector<TokenId> GadgetModel::intended_allowed(
    std::span<const TokenId> prefix) const {
  std::vector<TokenId> out = core_allowed(prefix);
  if (variant_ == GadgetVariant::kTopK) {
    // pad to exactly n + 1 entries with filler tokens b, bb, ...
    const std::size_t want = static_cast<std::size_t>(n_) + 1;
    TokenId filler = static_cast<TokenId>(n_) + 1;
    while (out.size() < want) out.push_back(filler++);
    std::sort(out.begin(), out.end());
  }
  return out;
}

std::vector<double> GadgetModel::next_dist_raw(
    std::span<const TokenId> prefix) const {
  const std::size_t v = vocab_->size();
  const TokenId eos = vocab_->eos_id();
  std::vector<double> dist(v, 0.0);
  // Degenerate after an EOS: absorbing terminator keeps the model total.
  for (TokenId id : prefix) {
    if (vocab_->is_eos(id)) {
      dist[eos] = 1.0;
      return dist;
    }
  }

  if (variant_ == GadgetVariant::kThreshold) {
    // Walk steps carry (1-delta)/n, stepping outside the walk carries
    // delta, the lambda token carries nothing, EOS soaks up the rest.
    std::uint64_t chars = 0;
    for (TokenId id : prefix) chars += vocab_->char_count(id);
    std::set<TokenId> walk;
    if (prefix.empty()) {
      for (TokenId id = 0; id < n_; ++id) walk.insert(id);
    } else if (prefix.back() < n_) {
      std::set<std::uint32_t> visited;
      for (TokenId id : prefix) {
        if (id < n_) visited.insert(id + 1);
      }
      for (std::uint32_t s : graph_.successors(prefix.back() + 1)) {
        if (!visited.count(s)) walk.insert(node_token(s));
      }
    }
    double acc = 0.0;
    for (TokenId id = 0; id < n_; ++id) {
      dist[id] = walk.count(id) ? (1.0 - delta_) / n_ : delta_;
      acc += dist[id];
    }
    dist[lambda_token()] = 0.0;
    dist[eos] = 1.0 - acc;
    return dist;
  }

  const auto intended = intended_allowed(prefix);
  const std::size_t inside = intended.size();
  const std::size_t outside = v - inside;
  const double p_in = (1.0 - eta_) / static_cast<double>(inside);
  const double p_out =
      outside == 0 ? 0.0 : eta_ / static_cast<double>(outside);
  for (std::size_t id = 0; id < v; ++id) dist[id] = p_out;
  for (TokenId id : intended) dist[id] = p_in;
  return dist;
}

double threshold_epsilon(std::uint32_t n, double delta) {
  return std::pow((1.0 - delta) / static_cast<double>(n),
                  static_cast<double>(n));
}

double default_delta(std::uint32_t n) {
  if (n < 2) throw UsageError("gadget graphs need at least two nodes");
  const double cap = 1.0 / (n + 1.0);
  // Shortest possible tokenization of a^lambda uses ceil(lambda/n) =
  // ceil((n+1)/2) tokens; a non-walk step at that length is the binding
  // case for separation.
  const std::uint32_t k_min = (n + 2) / 2;
  const double e = static_cast<double>(n - k_min + 1);
  double delta = 0.9 * cap;
  for (int i = 0; i < 64; ++i) {
    const double bound = std::pow((1.0 - delta) / n, e);
    delta = 0.9 * std::min(cap, bound);
  }
  if (!(delta > 0.0) || !(delta < cap) ||
      !(delta < std::pow((1.0 - delta) / n, e))) {
    throw ContractError("default delta fixed point failed");
  }
  return delta;
}

GadgetInstance build_gadget(const DirectedGraph& g, GadgetVariant variant,
                            const GadgetParams& params) {
  const std::uint32_t n = g.node_count();
  if (n < 2) throw UsageError("gadget graphs need at least two nodes");
  GadgetInstance inst;
  inst.variant = variant;
  inst.n = n;
  inst.lambda = std::uint64_t{n} * (n + 1) / 2;
  inst.target = std::string(inst.lambda, 'a');
  inst.eta = params.eta;
  if (variant == GadgetVariant::kThreshold) {
    inst.delta = params.delta.value_or(default_delta(n));
    inst.epsilon = threshold_epsilon(n, inst.delta);
    inst.rule = SequenceThreshold{inst.epsilon};
  } else if (variant == GadgetVariant::kTopP) {
    // Any p in ((1-eta)(1 - 1/|A|), 1-eta] recovers each intended set A
    // exactly; 1 - 2*eta works for every reachable set size up to n + 1.
    inst.rule = TopP{1.0 - 2.0 * params.eta};
  } else {
    inst.rule = TopK{n + 1};
  }
  inst.model = std::make_shared<const GadgetModel>(g, variant, params.eta,
                                                   inst.delta);
  inst.vocab = inst.model->vocab_ptr();
  return inst;
}

ReductionReport verify_reduction(const DirectedGraph& g, GadgetVariant variant,
                                 const OracleBudget& budget,
                                 const GadgetParams& params) {
  const GadgetInstance inst = build_gadget(g, variant, params);
  ReductionReport report;
  report.hamiltonian = hamiltonian_path_exists(g, budget);
  const auto longest = longest_plausible(*inst.model, inst.target, inst.rule,
                                         Temperature{1.0}, budget);
  report.nodes_explored = longest.nodes_explored;
  report.feasible = longest.sequence.has_value();
  report.longest_len = report.feasible ? longest.sequence->len() : 0;
  const bool len_says_ham = report.longest_len > 1;
  report.agree = (report.hamiltonian == len_says_ham) &&
                 (!report.hamiltonian ||
                  report.longest_len == static_cast<std::uint64_t>(inst.n));
  return report;
}

namespace {

struct GapSearch {
  const DirectedGraph& g;
  const GadgetModel& model;
  std::uint32_t n;
  std::uint64_t lambda;
  const OracleBudget& budget;
  std::uint64_t nodes = 0;
  GapReport report;

  void visit(std::vector<TokenId>& parts, std::uint64_t chars) {
    if (++nodes > budget.max_nodes) {
      throw BudgetError("gap check exceeded node budget");
    }
    if (parts.size() == n) {
      if (chars != lambda) return;
      const TokenSequence seq(model.vocab_ptr(), parts);
      const double prob = sequence_prob(model, seq, Temperature{1.0});
      // Hamiltonian means: n distinct nodes, consecutive ones joined.
      bool ham = true;
      std::set<TokenId> seen;
      for (std::size_t i = 0; i < parts.size() && ham; ++i) {
        if (!seen.insert(parts[i]).second) ham = false;
        if (i > 0 && !g.has_edge(parts[i - 1] + 1, parts[i] + 1)) ham = false;
      }
      report.full_length_count += 1;
      if (ham) {
        report.hamiltonian_count += 1;
        if (report.hamiltonian_count == 1) {
          report.min_hamiltonian_prob = report.max_hamiltonian_prob = prob;
        } else {
          report.min_hamiltonian_prob =
              std::min(report.min_hamiltonian_prob, prob);
          report.max_hamiltonian_prob =
              std::max(report.max_hamiltonian_prob, prob);
        }
      } else {
        report.max_non_hamiltonian_prob =
            std::max(report.max_non_hamiltonian_prob, prob);
      }
      return;
    }
    // Extend with node tokens only: the lambda token cannot fit in a full
    // length tokenization for n >= 2.
    for (TokenId id = 0; id < n; ++id) {
      const std::uint64_t size = id + 1;
      const std::uint64_t used = chars + size;
      const std::uint64_t left = n - parts.size() - 1;
      // Remaining parts are each in [1, n]; prune infeasible totals.
      if (used + left > lambda || used + left * n < lambda) continue;
      parts.push_back(id);
      visit(parts, used);
      parts.pop_back();
    }
  }
};

}  // namespace

GapReport threshold_gap_check(const DirectedGraph& g, double delta,
                              const OracleBudget& budget) {
  const std::uint32_t n = g.node_count();
  if (n < 2) throw UsageError("gadget graphs need at least two nodes");
  if (!(delta > 0.0) || !(delta < 1.0 / (n + 1.0))) {
    throw UsageError("gap check delta must be in (0, 1/(n+1))");
  }
  GadgetParams params;
  params.delta = delta;
  const GadgetInstance inst =
      build_gadget(g, GadgetVariant::kThreshold, params);
  GapSearch search{g, *inst.model, n, inst.lambda, budget, 0, {}};
  search.report.epsilon = inst.epsilon;
  std::vector<TokenId> parts;
  search.visit(parts, 0);
  GapReport& rep = search.report;
  const bool ham_ok =
      rep.hamiltonian_count == 0 ||
      (rep.min_hamiltonian_prob >= rep.epsilon * (1.0 - 1e-9) &&
       rep.max_hamiltonian_prob <= rep.epsilon * (1.0 + 1e-9));
  rep.separated = ham_ok && rep.max_non_hamiltonian_prob < rep.epsilon;
  return rep;
}

}  // namespace toksim
