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

// Drives run_cli in process and pins stdout, stderr and exit codes.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support.hpp"
#include "toksim/cli.hpp"
#include "toksim/errors.hpp"

using namespace toksim;
using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string dp(const std::string& name) {
  return toksim::testing::data_path(name);
}

bool has_line(const std::string& text, const std::string& line) {
  return text.find(line + "\n") != std::string::npos;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help and parse failures") {
  const auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("tokenization economics workbench") != std::string::npos);

  const auto sub_help = run({"tokenize", "--help"});
  CHECK(sub_help.code == kExitOk);
  CHECK(sub_help.out.find("--vocab") != std::string::npos);

  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  const auto missing = run({"tokenize", "--string", "aab"});
  CHECK(missing.code == kExitUsage);
  CHECK(!missing.err.empty());
  CHECK(run({"tokenize", "--vocab", dp("vab_vocab.json"), "--string", "aab",
             "--mode", "backwards"})
            .code == kExitUsage);
  CHECK(run({"hardness"}).code == kExitUsage);
}

TEST_CASE("tokenize modes and formats") {
  const std::vector<std::string> base = {"tokenize", "--vocab",
                                         dp("vab_vocab.json")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };

  const auto greedy = with({"--string", "aabab"});
  CHECK(greedy.code == kExitOk);
  CHECK(greedy.out == "4 3\n");

  const auto count = with({"--string", "aab", "--mode", "count"});
  CHECK(count.out == "4\n");

  const auto enumerated = with({"--string", "aab", "--mode", "enumerate"});
  CHECK(enumerated.out == "0 0 1\n0 3\n2 1\n4\n");

  const auto capped =
      with({"--string", "aab", "--mode", "enumerate", "--limit", "2"});
  CHECK(capped.out == "0 0 1\n0 3\n");

  const auto csv =
      with({"--string", "aab", "--mode", "enumerate", "--format", "csv"});
  CHECK(csv.out == "ids\n0 0 1\n0 3\n2 1\n4\n");

  const auto as_json =
      with({"--string", "aabab", "--format", "json"});
  CHECK(as_json.code == kExitOk);
  const json doc = json::parse(as_json.out);
  CHECK(doc.at("mode") == "greedy");
  CHECK(doc.at("ids") == std::vector<int>{4, 3});
}

TEST_CASE("misreport applies policies") {
  const auto truthful =
      run({"misreport", "--vocab", dp("vab_vocab.json"), "--policy",
           "truthful", "--ids", "4"});
  CHECK(truthful.code == kExitOk);
  CHECK(has_line(truthful.out, "reported_ids: 4"));
  CHECK(has_line(truthful.out, "modified: false"));
  CHECK(has_line(truthful.out, "verification_charged: false"));
  CHECK(truthful.out.find("candidate_plausible") == std::string::npos);

  const auto heuristic =
      run({"misreport", "--vocab", dp("vab_vocab.json"), "--policy",
           "heuristic:m=1,rule=topp:0.9,T=1.0", "--ids", "4", "--table",
           dp("demo_table_model.json")});
  CHECK(heuristic.code == kExitOk);
  CHECK(heuristic.out ==
        "policy: heuristic:m=1,rule=topp:0.9,T=1\n"
        "true_ids: 4\n"
        "reported_ids: 2 1\n"
        "splits_applied: 1\n"
        "modified: true\n"
        "candidate_plausible: true\n"
        "verification_charged: true\n"
        "trace: iter=0 pos=0 4 -> 2 1\n");

  const auto random =
      run({"misreport", "--vocab", dp("vab_vocab.json"), "--policy",
           "random:m=2,seed=9", "--ids", "4"});
  CHECK(random.code == kExitOk);
  CHECK(has_line(random.out, "verification_charged: false"));

  // the heuristic cannot audit itself without a model
  CHECK(run({"misreport", "--vocab", dp("vab_vocab.json"), "--policy",
             "heuristic:m=1,rule=topp:0.9,T=1.0", "--ids", "4"})
            .code == kExitUsage);
  // two input forms at once
  CHECK(run({"misreport", "--vocab", dp("vab_vocab.json"), "--policy",
             "truthful", "--ids", "4", "--string", "aab"})
            .code == kExitUsage);
  // unknown token id in the input
  const auto bad_ids = run({"misreport", "--vocab", dp("vab_vocab.json"),
                            "--policy", "truthful", "--ids", "9"});
  CHECK(bad_ids.code == kExitContract);
  CHECK(bad_ids.err.find("error:") != std::string::npos);
}

TEST_CASE("audit reports plausibility and sequence probability") {
  const std::vector<std::string> base = {
      "audit",   "--vocab", dp("vab_vocab.json"),
      "--rule",  "topp:0.9", "--table",
      dp("demo_table_model.json")};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };

  const auto good = with({"--ids", "2 1"});
  CHECK(good.code == kExitOk);
  CHECK(good.out == "plausible: true\nsequence_prob: 0.05\n");

  const auto bad = with({"--ids", "4"});
  CHECK(bad.code == kExitOk);
  CHECK(has_line(bad.out, "plausible: false"));

  const auto as_json = with({"--ids", "2 1", "--format", "json"});
  const json doc = json::parse(as_json.out);
  CHECK(doc.at("rule") == "topp:0.9");
  CHECK(doc.at("plausible") == true);
  CHECK(doc.at("sequence_prob") == 0.05);
}

TEST_CASE("price covers every mechanism") {
  const auto per_token =
      run({"price", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "per-token:r_o=2.0", "--ids", "4 3"});
  CHECK(per_token.code == kExitOk);
  CHECK(per_token.out == "len: 2\nchars: 5\nprice: 4.000000\n");

  const auto per_char =
      run({"price", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "per-char:r_c=0.5", "--ids", "4"});
  CHECK(per_char.out == "len: 1\nchars: 3\nprice: 1.500000\n");

  // greedy tokenizes the string form; the table prices characters so the
  // tokenization cannot matter
  const auto table =
      run({"price", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "char-table:" + dp("demo_chartable.json"), "--string", "aab"});
  CHECK(table.out == "len: 1\nchars: 3\nprice: 4.000000\n");

  CHECK(run({"price", "--vocab", dp("vab_vocab.json"), "--mechanism",
             "per-token:r_o=2.0", "--ids", "9"})
            .code == kExitContract);
  CHECK(run({"price", "--vocab", dp("vab_vocab.json"), "--mechanism",
             "flat-fee:1.0", "--ids", "4"})
            .code == kExitUsage);
}

TEST_CASE("ic-check finds the canonical witness") {
  const auto per_token =
      run({"ic-check", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "per-token:r_o=1.0", "--max-len", "4"});
  CHECK(per_token.code == kExitOk);
  CHECK(per_token.out ==
        "compatible: false\n"
        "witness_ids_a: 0 0\n"
        "witness_ids_b: 2\n"
        "witness_string: aa\n"
        "price_a: 2.000000\n"
        "price_b: 1.000000\n"
        "strings_checked: 3\n"
        "sequences_checked: 4\n");

  const auto per_char =
      run({"ic-check", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "per-char:r_c=1.0", "--max-len", "4"});
  CHECK(per_char.out ==
        "compatible: true\nstrings_checked: 31\nsequences_checked: 74\n");

  const auto as_json =
      run({"ic-check", "--vocab", dp("vab_vocab.json"), "--mechanism",
           "per-token:r_o=1.0", "--max-len", "4", "--format", "json"});
  const json doc = json::parse(as_json.out);
  CHECK(doc.at("compatible") == false);
  CHECK(doc.at("witness").at("ids_a") == std::vector<int>{0, 0});
  CHECK(doc.at("witness").at("price_b") == 1.0);
}

TEST_CASE("calibrate-tpc matches the usage corpus") {
  const auto text =
      run({"calibrate-tpc", "--usage", dp("demo_usage.csv"), "--r-o", "1.0"});
  CHECK(text.code == kExitOk);
  CHECK(text.out ==
        "n_records: 8\n"
        "tpc: 0.332911028832499\n"
        "r_c: 0.332911028832499\n");

  const auto scaled = run({"calibrate-tpc", "--usage", dp("demo_usage.csv"),
                           "--r-o", "2.0", "--format", "json"});
  const json doc = json::parse(scaled.out);
  CHECK(doc.at("tpc").get<double>() == 0.332911028832499);
  CHECK(doc.at("r_c").get<double>() ==
        doctest::Approx(2.0 * 0.332911028832499).epsilon(1e-15));

  CHECK(run({"calibrate-tpc", "--usage", dp("absent.csv"), "--r-o", "1.0"})
            .code == kExitUsage);
}

TEST_CASE("oracle subcommand runs both searches") {
  const auto longest =
      run({"oracle", "--kind", "longest-plausible", "--vocab",
           dp("vab_vocab.json"), "--string", "aab", "--rule", "topp:0.9",
           "--table", dp("demo_table_model.json")});
  CHECK(longest.code == kExitOk);
  CHECK(longest.out ==
        "feasible: true\nlength: 3\nids: 0 0 1\nnodes_explored: 6\n");

  const auto revenue =
      run({"oracle", "--kind", "max-revenue", "--vocab", dp("vab_vocab.json"),
           "--string", "aab", "--mechanism", "per-token:r_o=1.5"});
  CHECK(revenue.code == kExitOk);
  CHECK(has_line(revenue.out, "revenue: 4.500000"));
  CHECK(has_line(revenue.out, "ids: 0 0 1"));

  // each kind insists on the flag it needs
  CHECK(run({"oracle", "--kind", "longest-plausible", "--vocab",
             dp("vab_vocab.json"), "--string", "aab", "--table",
             dp("demo_table_model.json")})
            .code == kExitUsage);
  CHECK(run({"oracle", "--kind", "max-revenue", "--vocab",
             dp("vab_vocab.json"), "--string", "aab"})
            .code == kExitUsage);

  const auto starved =
      run({"oracle", "--kind", "max-revenue", "--vocab", dp("vab_vocab.json"),
           "--string", "aab", "--mechanism", "per-token:r_o=1.5",
           "--max-nodes", "1"});
  CHECK(starved.code == kExitBudget);
  CHECK(starved.err.find("error:") != std::string::npos);
}

TEST_CASE("hardness verify and gap") {
  const auto ham = run({"hardness", "verify", "--graph", dp("demo_graph.txt"),
                        "--variant", "topp"});
  CHECK(ham.code == kExitOk);
  CHECK(ham.out ==
        "variant: topp\n"
        "n: 4\n"
        "hamiltonian: true\n"
        "feasible: true\n"
        "longest_len: 4\n"
        "agree: true\n"
        "nodes_explored: 12\n");

  const auto nonham = run({"hardness", "verify", "--graph",
                           dp("demo_graph_nonham.txt"), "--variant", "topk"});
  CHECK(nonham.code == kExitOk);
  CHECK(has_line(nonham.out, "hamiltonian: false"));
  CHECK(has_line(nonham.out, "longest_len: 1"));
  CHECK(has_line(nonham.out, "agree: true"));

  // a hand-picked delta that is too loose lets a short split-heavy
  // tokenization clear the threshold; the default bound does not
  toksim::testing::ScratchDir tmp("cli_hardness");
  {
    std::ofstream g(tmp.file("sparse.txt"));
    g << "4\n4 2\n";
  }
  const auto loose = run({"hardness", "verify", "--graph", tmp.file("sparse.txt"),
                          "--variant", "thresh", "--delta", "0.1"});
  CHECK(loose.code == kExitOk);
  CHECK(has_line(loose.out, "agree: false"));
  CHECK(has_line(loose.out, "longest_len: 3"));
  const auto safe = run({"hardness", "verify", "--graph", tmp.file("sparse.txt"),
                         "--variant", "thresh"});
  CHECK(has_line(safe.out, "agree: true"));

  const auto gap =
      run({"hardness", "gap", "--graph", tmp.file("sparse.txt"), "--format",
           "json"});
  CHECK(gap.code == kExitOk);
  const json doc = json::parse(gap.out);
  CHECK(doc.at("n") == 4);
  CHECK(doc.at("full_length_count") == 44);
  CHECK(doc.at("hamiltonian_count") == 0);
  CHECK(doc.at("separated") == true);

  CHECK(run({"hardness", "verify", "--graph", dp("demo_graph.txt"),
             "--variant", "bogus"})
            .code == kExitUsage);
}

TEST_CASE("simulate writes the configured reports") {
  toksim::testing::ScratchDir tmp("cli_simulate");
  const auto result =
      run({"simulate", "--config", dp("demo_config.toml"), "--out",
           tmp.file("r"), "--sweep", "overcharge"});
  CHECK(result.code == kExitOk);

  std::vector<std::string> written;
  std::istringstream lines(result.out);
  std::string line;
  while (std::getline(lines, line)) {
    REQUIRE(line.rfind("wrote ", 0) == 0);
    written.push_back(line.substr(6));
  }
  REQUIRE(written.size() == 3);
  for (const auto& path : written) {
    CHECK(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) > 0);
  }

  CHECK(run({"simulate", "--sweep", "overcharge"}).code == kExitUsage);
  CHECK(run({"simulate", "--config", dp("absent.toml")}).code == kExitUsage);
}

}  // TEST_SUITE
