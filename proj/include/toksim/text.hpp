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

#ifndef TOKSIM_TEXT_HPP_
#define TOKSIM_TEXT_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace toksim {

// Characters are Unicode scalar values throughout. Token renderings are
// UTF-8 byte strings; these helpers are the only place that deals with the
// encoding itself.

// Decodes UTF-8, rejecting overlong forms, surrogates and truncated
// sequences with a UsageError.
std::vector<char32_t> decode_utf8(const std::string& s);

std::string encode_utf8(char32_t c);

// Number of Unicode scalars in s. Same validation as decode_utf8.
std::size_t scalar_count(const std::string& s);

}  // namespace toksim

#endif  // TOKSIM_TEXT_HPP_
