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

#ifndef TOKSIM_MONEY_HPP_
#define TOKSIM_MONEY_HPP_

#include <cstdint>
#include <string>

namespace toksim {

// Reports carry money as integer micro-units rendered with six decimals
// ("6.500000"), so files are exact and reproducible; internal math stays in
// doubles with the project wide 1e-9 comparison tolerance. Aggregates of
// money columns are computed from the rounded values so a reader of the
// CSV reproduces the summary bit for bit.

std::int64_t to_micro(double amount);
double from_micro(std::int64_t micro);
std::string format_micro(std::int64_t micro);
inline std::string format_money(double amount) {
  return format_micro(to_micro(amount));
}

// Shortest round-trip decimal form of a double, for dimensionless report
// columns (margins, fractions, probabilities).
std::string format_double(double value);

}  // namespace toksim

#endif  // TOKSIM_MONEY_HPP_
