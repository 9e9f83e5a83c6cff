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

#include "toksim/config.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "toksim/errors.hpp"
#include "toksim/toml.hpp"

namespace toksim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void bad_config(const std::string& what) {
  throw UsageError("config error: " + what);
}

const json& require(const json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) {
    bad_config("missing required key '" + key + "'");
  }
  return obj.at(key);
}

std::string get_string(const json& obj, const std::string& key) {
  const json& v = require(obj, key);
  if (!v.is_string()) bad_config("'" + key + "' must be a string");
  return v.get<std::string>();
}

std::string get_string_or(const json& obj, const std::string& key,
                          const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) bad_config("'" + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

double get_number(const json& obj, const std::string& key) {
  const json& v = require(obj, key);
  if (!v.is_number()) bad_config("'" + key + "' must be a number");
  return v.get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) bad_config("'" + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::int64_t get_int(const json& obj, const std::string& key) {
  const json& v = require(obj, key);
  if (!v.is_number_integer()) bad_config("'" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t get_int_or(const json& obj, const std::string& key,
                        std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) {
    bad_config("'" + key + "' must be an integer");
  }
  return obj.at(key).get<std::int64_t>();
}

// Resolves a possibly-relative path against the config file's directory.
std::string resolve(const fs::path& base_dir, const std::string& p) {
  if (p.empty()) return p;
  fs::path candidate(p);
  if (candidate.is_absolute()) return candidate.lexically_normal().string();
  return (base_dir / candidate).lexically_normal().string();
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  fs::path file(path);
  std::string text = read_file(path);

  json doc;
  std::string ext = file.extension().string();
  if (ext == ".toml") {
    doc = parse_toml(text);
  } else if (ext == ".json") {
    doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded()) bad_config("invalid JSON in " + path);
  } else {
    bad_config("config file must end in .toml or .json: " + path);
  }
  if (!doc.is_object()) bad_config("config root must be a table/object");

  fs::path base_dir = file.has_parent_path() ? file.parent_path() : fs::path(".");

  ExperimentConfig cfg;
  cfg.vocabulary = resolve(base_dir, get_string(doc, "vocabulary"));
  cfg.rule = get_string(doc, "rule");
  cfg.temperature = get_number_or(doc, "temperature", 1.0);
  cfg.mechanism = get_string(doc, "mechanism");
  cfg.prompts = resolve(base_dir, get_string(doc, "prompts"));
  cfg.calibration_prompts =
      resolve(base_dir, get_string_or(doc, "calibration_prompts", ""));
  cfg.out_dir = get_string_or(doc, "out_dir", "results");

  const json& model = require(doc, "model");
  cfg.model.type = get_string(model, "type");
  if (cfg.model.type == "table") {
    cfg.model.path = resolve(base_dir, get_string(model, "path"));
  } else if (cfg.model.type == "ngram") {
    cfg.model.path = resolve(base_dir, get_string(model, "corpus"));
    cfg.model.order = static_cast<int>(get_int_or(model, "order", 2));
    cfg.model.alpha = get_number_or(model, "alpha", 1.0);
    if (cfg.model.order < 1) bad_config("model.order must be >= 1");
    if (!(cfg.model.alpha > 0.0)) bad_config("model.alpha must be > 0");
  } else {
    bad_config("model.type must be \"table\" or \"ngram\"");
  }

  const json& policies = require(doc, "policies");
  if (!policies.is_array() || policies.empty()) {
    bad_config("'policies' must be a non-empty array of policy strings");
  }
  for (const json& p : policies) {
    if (!p.is_string()) bad_config("policy entries must be strings");
    cfg.policies.push_back(p.get<std::string>());
  }

  const json& costs = require(doc, "costs");
  cfg.c_o = get_number(costs, "c_o");
  cfg.c_v = get_number(costs, "c_v");
  if (cfg.c_o < 0.0 || cfg.c_v < 0.0) bad_config("costs must be >= 0");

  const json& lengths = require(doc, "output_length");
  cfg.min_output_len = static_cast<int>(get_int(lengths, "min"));
  cfg.max_output_len = static_cast<int>(get_int(lengths, "max"));
  if (cfg.min_output_len < 1 || cfg.max_output_len < cfg.min_output_len) {
    bad_config("output_length requires 1 <= min <= max");
  }

  cfg.replications = static_cast<int>(get_int(doc, "replications"));
  if (cfg.replications < 1) bad_config("replications must be >= 1");
  std::int64_t seed = get_int(doc, "seed");
  cfg.seed = static_cast<std::uint64_t>(seed);
  cfg.confidence = get_number_or(doc, "confidence", 0.90);
  if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0)) {
    bad_config("confidence must lie in (0,1)");
  }
  cfg.threads = static_cast<int>(get_int_or(doc, "threads", 1));
  if (cfg.threads < 1) bad_config("threads must be >= 1");

  if (doc.contains("m_values")) {
    for (const json& v : doc.at("m_values")) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        bad_config("m_values entries must be integers >= 0");
      }
      cfg.m_values.push_back(static_cast<int>(v.get<std::int64_t>()));
    }
  }
  if (doc.contains("margins")) {
    for (const json& v : doc.at("margins")) {
      if (!v.is_number()) bad_config("margins entries must be numbers");
      double rho = v.get<double>();
      if (!(rho > 0.0 && rho < 1.0)) bad_config("margins must lie in (0,1)");
      cfg.margins.push_back(rho);
    }
  }
  if (doc.contains("rho_values")) {
    for (const json& v : doc.at("rho_values")) {
      if (!v.is_number()) bad_config("rho_values entries must be numbers");
      double rho = v.get<double>();
      if (!(rho > 0.0 && rho < 1.0)) bad_config("rho_values must lie in (0,1)");
      cfg.rho_values.push_back(rho);
    }
  }

  // char-table mechanisms embed a path; resolve it like the other paths
  const std::string kTablePrefix = "char-table:";
  if (cfg.mechanism.rfind(kTablePrefix, 0) == 0) {
    cfg.mechanism =
        kTablePrefix + resolve(base_dir, cfg.mechanism.substr(kTablePrefix.size()));
  }
  return cfg;
}

std::vector<PromptRecord> load_prompts(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open prompt corpus: " + path);

  std::vector<PromptRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // tolerate blank lines and CRLF corpora
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json rec = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (rec.is_discarded() || !rec.is_object()) {
      throw UsageError("prompt corpus line " + std::to_string(line_no) +
                       " is not a JSON object");
    }
    PromptRecord r;
    r.id = get_string(rec, "id");
    r.prompt = get_string(rec, "prompt");
    r.lang = get_string_or(rec, "lang", "");
    if (!seen.insert(r.id).second) {
      throw UsageError("duplicate prompt id '" + r.id + "' at line " +
                       std::to_string(line_no));
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw UsageError("prompt corpus is empty: " + path);
  return records;
}

}  // namespace toksim
