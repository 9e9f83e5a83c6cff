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

#include "toksim/toml.hpp"

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "toksim/errors.hpp"

namespace toksim {
namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw UsageError("toml parse error at line " + std::to_string(line_no) +
                   ": " + what);
}

// Strips a trailing comment that is not inside a basic string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (in_string) {
      if (c == '\\') {
        ++i;  // skip escaped char
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::vector<std::string> split_dotted_key(const std::string& key,
                                          std::size_t line_no) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : key) {
    if (c == '.') {
      if (cur.empty()) fail(line_no, "empty key segment");
      parts.push_back(cur);
      cur.clear();
    } else if (is_bare_key_char(c)) {
      cur += c;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      // tolerated around dots only; a space inside a segment is caught below
      if (!cur.empty()) cur += '\0';
    } else {
      fail(line_no, std::string("unexpected character '") + c + "' in key");
    }
  }
  if (cur.empty()) fail(line_no, "empty key segment");
  parts.push_back(cur);
  for (auto& p : parts) {
    if (p.find('\0') != std::string::npos) fail(line_no, "space inside key");
  }
  return parts;
}

std::string parse_basic_string(const std::string& s, std::size_t& i,
                               std::size_t line_no) {
  // s[i] == '"' on entry
  std::string out;
  ++i;
  while (i < s.size() && s[i] != '"') {
    char c = s[i];
    if (c == '\\') {
      ++i;
      if (i >= s.size()) fail(line_no, "dangling escape in string");
      switch (s[i]) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: fail(line_no, "unsupported escape in string");
      }
    } else {
      out += c;
    }
    ++i;
  }
  if (i >= s.size()) fail(line_no, "unterminated string");
  ++i;  // closing quote
  return out;
}

nlohmann::json parse_scalar(const std::string& raw, std::size_t line_no) {
  std::string v = trim(raw);
  if (v.empty()) fail(line_no, "missing value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    std::size_t i = 0;
    std::string s = parse_basic_string(v, i, line_no);
    if (trim(v.substr(i)).size() != 0) fail(line_no, "trailing junk after string");
    return s;
  }
  // numeric: TOML allows underscores as separators
  std::string digits;
  bool is_float = false;
  for (char c : v) {
    if (c == '_') continue;
    if (c == '.' || c == 'e' || c == 'E') is_float = true;
    digits += c;
  }
  try {
    std::size_t pos = 0;
    if (is_float) {
      double d = std::stod(digits, &pos);
      if (pos != digits.size()) fail(line_no, "bad float literal '" + v + "'");
      return d;
    }
    long long n = std::stoll(digits, &pos);
    if (pos != digits.size()) fail(line_no, "bad integer literal '" + v + "'");
    return static_cast<std::int64_t>(n);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    fail(line_no, "bad value '" + v + "'");
  }
}

nlohmann::json parse_value(const std::string& raw, std::size_t line_no) {
  std::string v = trim(raw);
  if (v.empty()) fail(line_no, "missing value");
  if (v.front() != '[') return parse_scalar(v, line_no);
  if (v.back() != ']') fail(line_no, "unterminated array");
  nlohmann::json arr = nlohmann::json::array();
  std::string inner = v.substr(1, v.size() - 2);
  // split on commas outside strings
  std::string cur;
  bool in_string = false;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    char c = inner[i];
    if (in_string) {
      cur += c;
      if (c == '\\' && i + 1 < inner.size()) cur += inner[++i];
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
      cur += c;
    } else if (c == ',') {
      arr.push_back(parse_scalar(cur, line_no));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (in_string) fail(line_no, "unterminated string in array");
  if (!trim(cur).empty()) arr.push_back(parse_scalar(cur, line_no));
  return arr;
}

nlohmann::json* descend(nlohmann::json* root,
                        const std::vector<std::string>& path,
                        std::size_t line_no) {
  nlohmann::json* node = root;
  for (const auto& part : path) {
    if (!node->is_object()) fail(line_no, "key collides with a value");
    node = &(*node)[part];
    if (node->is_null()) *node = nlohmann::json::object();
  }
  return node;
}

}  // namespace

// Net bracket depth outside basic strings; used to let arrays span lines.
int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
    } else if (c == '"') {
      in_string = true;
    } else if (c == '[') {
      ++depth;
    } else if (c == ']') {
      --depth;
    }
  }
  return depth;
}

nlohmann::json parse_toml(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;

  std::vector<std::string> raw_lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    raw_lines.push_back(text.substr(start, end - start));
    if (end == text.size()) break;
    start = end + 1;
  }

  for (std::size_t idx = 0; idx < raw_lines.size(); ++idx) {
    const std::size_t line_no = idx + 1;
    std::string line = trim(strip_comment(raw_lines[idx]));
    if (line.empty()) continue;

    // an array value may continue over following lines until its brackets
    // close; table headers never do (their line starts with '[' and a
    // header line always balances)
    if (line.front() != '[') {
      int depth = bracket_balance(line);
      while (depth > 0 && idx + 1 < raw_lines.size()) {
        ++idx;
        std::string cont = trim(strip_comment(raw_lines[idx]));
        line += ' ';
        line += cont;
        depth = bracket_balance(line);
      }
      if (depth > 0) fail(line_no, "unterminated array");
    }

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "unterminated table header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) fail(line_no, "empty table header");
      auto path = split_dotted_key(name, line_no);
      table = descend(&root, path, line_no);
      if (!table->is_object()) fail(line_no, "table redefines a value");
    } else {
      std::size_t eq = std::string::npos;
      bool in_string = false;
      for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_string) {
          if (c == '\\') ++i;
          else if (c == '"') in_string = false;
        } else if (c == '"') {
          in_string = true;
        } else if (c == '=') {
          eq = i;
          break;
        }
      }
      if (eq == std::string::npos) fail(line_no, "expected key = value");
      auto path = split_dotted_key(trim(line.substr(0, eq)), line_no);
      nlohmann::json* node = table;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        node = descend(node, {path[i]}, line_no);
      }
      const std::string& leaf = path.back();
      if (node->contains(leaf)) fail(line_no, "duplicate key '" + leaf + "'");
      (*node)[leaf] = parse_value(line.substr(eq + 1), line_no);
    }
  }
  return root;
}

}  // namespace toksim
