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

#include "toksim/money.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "toksim/errors.hpp"

namespace toksim {

std::int64_t to_micro(double amount) {
  if (!std::isfinite(amount) || std::fabs(amount) > 9.0e12) {
    throw ContractError("money amount out of range");
  }
  return std::llround(amount * 1e6);
}

double from_micro(std::int64_t micro) {
  return static_cast<double>(micro) / 1e6;
}

std::string format_micro(std::int64_t micro) {
  const bool neg = micro < 0;
  const std::uint64_t abs =
      neg ? -static_cast<std::uint64_t>(micro) : static_cast<std::uint64_t>(micro);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s%llu.%06llu", neg ? "-" : "",
                static_cast<unsigned long long>(abs / 1000000),
                static_cast<unsigned long long>(abs % 1000000));
  return buf;
}

std::string format_double(double value) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace toksim
