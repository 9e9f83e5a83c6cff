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

// Hardness gadgets: walk models, reductions, threshold separation.

#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "toksim/errors.hpp"
#include "toksim/gadgets.hpp"
#include "toksim/graph.hpp"
#include "toksim/oracles.hpp"
#include "toksim/sampling.hpp"

using namespace toksim;

namespace {

DirectedGraph path4() {
  return DirectedGraph::from_text("4\n1 2\n2 3\n3 4\n");
}

// Single edge 4 -> 2; certainly no Hamiltonian path.
DirectedGraph sparse4() {
  return DirectedGraph::from_text("4\n4 2\n");
}

}  // namespace

TEST_SUITE("gadgets") {

TEST_CASE("variant names round-trip") {
  for (const char* name : {"topp", "topk", "thresh"}) {
    CHECK(format_gadget_variant(parse_gadget_variant(name)) == name);
  }
  CHECK_THROWS_AS(parse_gadget_variant("nucleus"), UsageError);
}

TEST_CASE("gadget instances have the documented shape") {
  const auto g = path4();

  SUBCASE("top-p instance") {
    const auto inst = build_gadget(g, GadgetVariant::kTopP);
    CHECK(inst.n == 4);
    CHECK(inst.lambda == 10);
    CHECK(inst.target == std::string(10, 'a'));
    CHECK(inst.vocab->size() == 6);  // a..aaaa, the 10-char token, eos
    CHECK(inst.vocab->rendering(inst.model->node_token(3)) == "aaa");
    CHECK(inst.vocab->rendering(inst.model->lambda_token()) ==
          std::string(10, 'a'));
    REQUIRE(std::holds_alternative<TopP>(inst.rule));
    CHECK(std::get<TopP>(inst.rule).p ==
          doctest::Approx(1.0 - 2e-6).epsilon(1e-15));
  }

  SUBCASE("top-k instance pads the vocabulary with fillers") {
    const auto inst = build_gadget(g, GadgetVariant::kTopK);
    CHECK(inst.vocab->size() == 10);  // plus b, bb, bbb, bbbb
    REQUIRE(std::holds_alternative<TopK>(inst.rule));
    CHECK(std::get<TopK>(inst.rule).k == 5);
  }

  SUBCASE("threshold instance computes epsilon from delta") {
    GadgetParams params;
    params.delta = 0.05;
    const auto inst = build_gadget(g, GadgetVariant::kThreshold, params);
    CHECK(inst.delta == 0.05);
    CHECK(inst.epsilon ==
          doctest::Approx(std::pow(0.95 / 4.0, 4.0)).epsilon(1e-15));
    REQUIRE(std::holds_alternative<SequenceThreshold>(inst.rule));
    CHECK(std::get<SequenceThreshold>(inst.rule).eps == inst.epsilon);
  }

  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(build_gadget(DirectedGraph(1), GadgetVariant::kTopP),
                    UsageError);
    GadgetParams neg;
    neg.eta = -0.1;
    CHECK_THROWS_AS(build_gadget(g, GadgetVariant::kTopP, neg), UsageError);
    GadgetParams big;
    big.eta = 0.1;  // 0.1 * (4 + 2) >= 0.5
    CHECK_THROWS_AS(build_gadget(g, GadgetVariant::kTopP, big), UsageError);
    GadgetParams bad_delta;
    bad_delta.delta = 0.25;  // >= 1 / (n + 1)
    CHECK_THROWS_AS(build_gadget(g, GadgetVariant::kThreshold, bad_delta),
                    UsageError);
  }
}

TEST_CASE("walk model serves the intended sets") {
  const auto g = path4();
  const auto inst = build_gadget(g, GadgetVariant::kTopP);
  const auto& m = *inst.model;
  const TokenId eos = inst.vocab->eos_id();

  const std::vector<TokenId> empty{};
  CHECK(m.intended_allowed(empty) == std::vector<TokenId>{0, 1, 2, 3, 4});
  const std::vector<TokenId> at1{0};
  CHECK(m.intended_allowed(at1) == std::vector<TokenId>{1, eos});
  const std::vector<TokenId> at2{0, 1};
  CHECK(m.intended_allowed(at2) == std::vector<TokenId>{2, eos});
  // a completed walk only continues with eos
  const std::vector<TokenId> done{0, 1, 2, 3};
  CHECK(m.intended_allowed(done) == std::vector<TokenId>{eos});
  // the lambda token ends the walk as well
  const std::vector<TokenId> lam{4};
  CHECK(m.intended_allowed(lam) == std::vector<TokenId>{eos});

  // revisits are excluded from the walk continuation
  DirectedGraph loop(3);
  loop.add_edge(1, 2);
  loop.add_edge(2, 1);
  loop.add_edge(2, 3);
  const auto li = build_gadget(loop, GadgetVariant::kTopP);
  const std::vector<TokenId> back{0, 1};
  CHECK(li.model->intended_allowed(back) ==
        std::vector<TokenId>{2, li.vocab->eos_id()});
}

TEST_CASE("step distributions realize the intended sets under the rule") {
  for (const auto variant :
       {GadgetVariant::kTopP, GadgetVariant::kTopK}) {
    CAPTURE(format_gadget_variant(variant));
    for (const double eta : {1e-6, 0.01, 0.0}) {
      GadgetParams params;
      params.eta = eta;
      const auto inst = build_gadget(path4(), variant, params);
      const std::vector<std::vector<TokenId>> prefixes{
          {}, {0}, {0, 1}, {0, 1, 2}, {0, 1, 2, 3}, {4}, {2}};
      for (const auto& prefix : prefixes) {
        const auto dist = inst.model->next_dist_raw(prefix);
        double sum = 0.0;
        for (double p : dist) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        auto want = inst.model->intended_allowed(prefix);
        std::sort(want.begin(), want.end());
        CHECK(allowed_set(*inst.model, prefix, inst.rule, Temperature{1.0}) ==
              want);
      }
    }
  }
}

TEST_CASE("threshold distribution splits walk and stray mass") {
  GadgetParams params;
  params.delta = 0.05;
  const auto inst = build_gadget(path4(), GadgetVariant::kThreshold, params);
  const std::vector<TokenId> empty{};
  const auto d0 = inst.model->next_dist_raw(empty);
  for (TokenId id = 0; id < 4; ++id) {
    CHECK(d0[id] == doctest::Approx(0.2375).epsilon(1e-12));
  }
  CHECK(d0[4] == 0.0);
  CHECK(d0[5] == doctest::Approx(0.05).epsilon(1e-12));

  const std::vector<TokenId> at1{0};
  const auto d1 = inst.model->next_dist_raw(at1);
  CHECK(d1[1] == doctest::Approx(0.2375).epsilon(1e-12));
  CHECK(d1[0] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(d1[2] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(d1[5] == doctest::Approx(0.6125).epsilon(1e-12));

  // after eos the model is absorbed
  const std::vector<TokenId> ended{0, 5};
  const auto de = inst.model->next_dist_raw(ended);
  CHECK(de[5] == 1.0);
}

TEST_CASE("reductions decide the fixed graphs") {
  for (const auto variant : {GadgetVariant::kTopP, GadgetVariant::kTopK,
                             GadgetVariant::kThreshold}) {
    CAPTURE(format_gadget_variant(variant));
    const auto yes = verify_reduction(path4(), variant);
    CHECK(yes.hamiltonian);
    CHECK(yes.feasible);
    CHECK(yes.longest_len == 4);
    CHECK(yes.agree);

    const auto no = verify_reduction(sparse4(), variant);
    CHECK(!no.hamiltonian);
    CHECK(no.longest_len <= 1);
    CHECK(no.agree);
  }
}

TEST_CASE("exact-mode reductions agree on every small digraph") {
  for (std::uint32_t n : {2u, 3u}) {
    const std::uint64_t masks = 1ull << (n * (n - 1));
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
      const auto g = DirectedGraph::from_edge_mask(n, mask);
      for (const auto variant : {GadgetVariant::kTopP, GadgetVariant::kTopK,
                                 GadgetVariant::kThreshold}) {
        GadgetParams params;
        params.eta = 0.0;
        const auto rep = verify_reduction(g, variant, OracleBudget{}, params);
        CAPTURE(n);
        CAPTURE(mask);
        CAPTURE(format_gadget_variant(variant));
        CHECK(rep.agree);
      }
    }
  }
}

TEST_CASE("default delta stays below the one-stray-step bound") {
  for (std::uint32_t n = 2; n <= 10; ++n) {
    const double delta = default_delta(n);
    CHECK(delta > 0.0);
    CHECK(delta < 1.0 / (n + 1.0));
    const std::uint32_t k_min = (n + 2) / 2;
    const double e = static_cast<double>(n - k_min + 1);
    CHECK(delta < std::pow((1.0 - delta) / n, e));
  }
  CHECK_THROWS_AS(default_delta(1), UsageError);
}

TEST_CASE("a loose delta breaks the reduction where the default holds") {
  // With delta = 0.1 on the single-edge graph, the three-token sequence
  // aaaa aaaa aa rides one stray revisit yet clears epsilon, so length
  // no longer certifies a Hamiltonian path. The fixed-point delta does.
  GadgetParams loose;
  loose.delta = 0.1;
  const auto broken =
      verify_reduction(sparse4(), GadgetVariant::kThreshold, OracleBudget{},
                       loose);
  CHECK(!broken.hamiltonian);
  CHECK(broken.longest_len > 1);
  CHECK(!broken.agree);

  const auto fixed = verify_reduction(sparse4(), GadgetVariant::kThreshold);
  CHECK(fixed.agree);
}

TEST_CASE("threshold gap separates full-length walks") {
  const auto rep = threshold_gap_check(path4(), default_delta(4));
  CHECK(rep.full_length_count == 44);  // 10 split into 4 parts of size 1..4
  CHECK(rep.hamiltonian_count == 1);
  CHECK(rep.separated);
  CHECK(rep.min_hamiltonian_prob == doctest::Approx(rep.epsilon));
  CHECK(rep.max_hamiltonian_prob == doctest::Approx(rep.epsilon));
  CHECK(rep.max_non_hamiltonian_prob < rep.epsilon);

  // The full-length gap holds even for the delta that breaks the overall
  // reduction: the counterexample lives at shorter tokenizations.
  const auto loose = threshold_gap_check(sparse4(), 0.1);
  CHECK(loose.hamiltonian_count == 0);
  CHECK(loose.separated);

  CHECK_THROWS_AS(threshold_gap_check(path4(), 0.5), UsageError);
  CHECK_THROWS_AS(threshold_gap_check(DirectedGraph(1), 0.05), UsageError);
}

TEST_CASE("gap probabilities bracket epsilon on random graphs") {
  SplitMix64 rng(909);
  for (int trial = 0; trial < 25; ++trial) {
    const std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.below(3));
    const std::uint64_t mask = rng.next() & ((1ull << (n * (n - 1))) - 1);
    const auto g = DirectedGraph::from_edge_mask(n, mask);
    const auto rep = threshold_gap_check(g, default_delta(n));
    CAPTURE(n);
    CAPTURE(mask);
    CHECK(rep.separated);
    CHECK((rep.hamiltonian_count > 0) == hamiltonian_path_exists(g));
  }
}

}  // TEST_SUITE
