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

#include "toksim/text.hpp"

#include "toksim/errors.hpp"

namespace toksim {

namespace {

[[noreturn]] void bad_utf8(std::size_t pos) {
  throw UsageError("invalid utf-8 at byte " + std::to_string(pos));
}

}  // namespace

std::vector<char32_t> decode_utf8(const std::string& s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t extra = 0;
    char32_t min_cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xe0) == 0xc0) {
      cp = b0 & 0x1f;
      extra = 1;
      min_cp = 0x80;
    } else if ((b0 & 0xf0) == 0xe0) {
      cp = b0 & 0x0f;
      extra = 2;
      min_cp = 0x800;
    } else if ((b0 & 0xf8) == 0xf0) {
      cp = b0 & 0x07;
      extra = 3;
      min_cp = 0x10000;
    } else {
      bad_utf8(i);
    }
    if (i + extra >= s.size()) bad_utf8(i);
    for (std::size_t k = 1; k <= extra; ++k) {
      const unsigned char b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xc0) != 0x80) bad_utf8(i + k);
      cp = (cp << 6) | (b & 0x3f);
    }
    if (cp < min_cp) bad_utf8(i);                    // overlong
    if (cp >= 0xd800 && cp <= 0xdfff) bad_utf8(i);   // surrogate
    if (cp > 0x10ffff) bad_utf8(i);
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xc0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  } else if (c < 0x10000) {
    if (c >= 0xd800 && c <= 0xdfff) {
      throw UsageError("cannot encode surrogate code point");
    }
    out.push_back(static_cast<char>(0xe0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  } else if (c <= 0x10ffff) {
    out.push_back(static_cast<char>(0xf0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3f)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3f)));
  } else {
    throw UsageError("code point out of range");
  }
  return out;
}

std::size_t scalar_count(const std::string& s) {
  return decode_utf8(s).size();
}

}  // namespace toksim
