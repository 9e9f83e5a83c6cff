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

#ifndef TOKSIM_CONFIG_HPP_
#define TOKSIM_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace toksim {

// How the generative model is built. "table" loads an explicit conditional
// table, "ngram" trains an n-gram model from a token-corpus file.
struct ModelSpec {
  std::string type;    // "table" | "ngram"
  std::string path;    // table JSON or ngram corpus, resolved at load
  int order = 2;       // ngram only
  double alpha = 1.0;  // ngram smoothing, > 0
};

// One experiment description, loadable from TOML or JSON (same schema).
// All relative paths inside the file resolve against the file's directory.
struct ExperimentConfig {
  std::string vocabulary;  // vocabulary JSON path
  ModelSpec model;
  std::string rule;        // sampling rule, e.g. "topp:0.9"
  double temperature = 1.0;
  std::vector<std::string> policies;  // reporting policy strings
  std::string mechanism;              // pricing mechanism string
  double c_o = 0.0;  // generation cost per true token
  double c_v = 0.0;  // plausibility verification cost per output
  std::string prompts;  // prompt corpus path (JSONL)
  std::string calibration_prompts;  // optional disjoint corpus for tpc
  int min_output_len = 1;
  int max_output_len = 1;
  int replications = 1;
  std::uint64_t seed = 0;
  std::string out_dir;
  double confidence = 0.90;
  int threads = 1;
  // sweep axes; a sweep that needs an empty axis raises UsageError
  std::vector<int> m_values;
  std::vector<double> margins;     // profit sweep, each in (0,1)
  std::vector<double> rho_values;  // margin-cdf sweep, each in (0,1)

  static ExperimentConfig load(const std::string& path);
};

// One prompt corpus record. Prompts only key the model-conditioning stream;
// their text is never tokenized.
struct PromptRecord {
  std::string id;
  std::string prompt;
  std::string lang;  // optional tag, may be empty
};

// Loads a JSONL prompt corpus. Duplicate ids and empty corpora are
// usage errors.
std::vector<PromptRecord> load_prompts(const std::string& path);

}  // namespace toksim

#endif  // TOKSIM_CONFIG_HPP_
