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

#ifndef TOKSIM_GADGETS_HPP_
#define TOKSIM_GADGETS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toksim/graph.hpp"
#include "toksim/model.hpp"
#include "toksim/oracles.hpp"
#include "toksim/sampling.hpp"

namespace toksim {

// Reductions from directed Hamiltonian path to the constrained longest
// tokenization problem. Given a digraph on n >= 2 nodes, the gadget builds
// a unary vocabulary where node j becomes the token a^j, plus one long
// token a^lambda with lambda = n(n+1)/2, and a model whose step behavior
// walks the graph: after entering node u, exactly the tokens of unvisited
// successors of u stay available. The target string a^lambda then has a
// plausible tokenization longer than one token if and only if the graph
// has a Hamiltonian path (distinct node tokens must cover lambda
// characters, which forces all n of them), and that tokenization has
// exactly n tokens.

enum class GadgetVariant { kTopP, kTopK, kThreshold };

GadgetVariant parse_gadget_variant(const std::string& text);
std::string format_gadget_variant(GadgetVariant v);

struct GadgetParams {
  // Mass bled onto tokens outside the intended allowed set so that the
  // top-p / top-k selection over explicit probabilities reproduces the set
  // construction. eta = 0 switches to exact oracle sets (zero probability
  // outside the intended set), which the selection rules recover verbatim.
  double eta = 1e-6;
  // Threshold variant step-out probability; default is default_delta(n).
  std::optional<double> delta;
};

// Step distributions realizing the constructions. Immutable; total over
// arbitrary prefixes (anything after the target string degenerates to EOS).
class GadgetModel : public GenerativeModel {
 public:
  GadgetModel(const DirectedGraph& g, GadgetVariant variant, double eta,
              double delta);

  const Vocabulary& vocab() const override { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& vocab_ptr() const override {
    return vocab_;
  }
  std::vector<double> next_dist_raw(
      std::span<const TokenId> prefix) const override;

  // The set construction itself, independent of the probability
  // realization: {EOS} once lambda characters were rendered, everything
  // but EOS on the empty prefix, otherwise unvisited successor tokens of
  // the last node plus EOS; the top-k variant pads with filler tokens to
  // exactly n + 1 entries. Ascending token id.
  std::vector<TokenId> intended_allowed(
      std::span<const TokenId> prefix) const;

  std::uint32_t n() const { return n_; }
  std::uint64_t lambda() const { return lambda_; }
  TokenId node_token(std::uint32_t node) const { return node - 1; }
  TokenId lambda_token() const { return n_; }

 private:
  std::vector<TokenId> core_allowed(std::span<const TokenId> prefix) const;

  DirectedGraph graph_;
  GadgetVariant variant_;
  double eta_;
  double delta_;
  std::uint32_t n_;
  std::uint64_t lambda_;
  std::shared_ptr<const Vocabulary> vocab_;
};

struct GadgetInstance {
  std::shared_ptr<const Vocabulary> vocab;
  std::shared_ptr<const GadgetModel> model;
  std::string target;  // a^lambda
  SamplingRule rule;
  GadgetVariant variant;
  std::uint32_t n = 0;
  std::uint64_t lambda = 0;
  double eta = 0.0;
  double delta = 0.0;    // threshold only
  double epsilon = 0.0;  // threshold only
};

// Largest delta that keeps the threshold reduction sound for this n: small
// enough that any tokenization with a step outside the walk (probability
// delta) stays below epsilon = ((1-delta)/n)^n even at the shortest
// possible length ceil(lambda/n), and below the classic 1/(n+1) cap.
double default_delta(std::uint32_t n);

double threshold_epsilon(std::uint32_t n, double delta);

// Builds the vocabulary, model, target and rule for one graph. n >= 2.
GadgetInstance build_gadget(const DirectedGraph& g, GadgetVariant variant,
                            const GadgetParams& params = {});

struct ReductionReport {
  bool hamiltonian = false;
  bool feasible = false;  // some plausible tokenization exists
  std::uint64_t longest_len = 0;
  bool agree = false;  // (ham <=> len > 1) and (ham => len == n)
  std::uint64_t nodes_explored = 0;
};

// Runs both sides of the reduction and checks they agree: the Hamiltonian
// oracle on the graph against the longest plausible tokenization of the
// gadget target.
ReductionReport verify_reduction(const DirectedGraph& g, GadgetVariant variant,
                                 const OracleBudget& budget = {},
                                 const GadgetParams& params = {});

struct GapReport {
  double epsilon = 0.0;
  std::uint64_t full_length_count = 0;
  std::uint64_t hamiltonian_count = 0;
  double min_hamiltonian_prob = 0.0;
  double max_hamiltonian_prob = 0.0;
  double max_non_hamiltonian_prob = 0.0;
  bool separated = false;
};

// Audits the threshold construction over every full length (n token)
// tokenization of the target: Hamiltonian walks must sit exactly at
// epsilon, everything else strictly below. Accepts any delta in
// (0, 1/(n+1)); shorter tokenizations are out of scope here, which is why
// verify_reduction insists on the tighter default_delta.
GapReport threshold_gap_check(const DirectedGraph& g, double delta,
                              const OracleBudget& budget = {});

}  // namespace toksim

#endif  // TOKSIM_GADGETS_HPP_
