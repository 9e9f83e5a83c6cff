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

#ifndef TOKSIM_ERRORS_HPP_
#define TOKSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace toksim {

// Exit codes used by the command line tool. Library code signals the same
// three failure classes through the exception types below.
enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,     // bad arguments, malformed files, invalid parameters
  kExitContract = 2,  // integrity or model/data contract violations
  kExitBudget = 3,    // oracle budget exhausted
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller handed us something unusable: unparsable spec strings, malformed
// config or input files, parameters outside their documented domain.
class UsageError : public Error {
 public:
  explicit UsageError(const std::string& msg) : Error(msg) {}
};

// Data or model broke a contract that well-formed inputs are supposed to
// guarantee: distributions that do not sum to one, unknown token ids,
// vocabularies without alphabet closure, string preservation failures.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& msg) : Error(msg) {}
};

// An exact oracle ran out of its node or wall clock budget.
class BudgetError : public Error {
 public:
  explicit BudgetError(const std::string& msg) : Error(msg) {}
};

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) != nullptr) return kExitUsage;
  if (dynamic_cast<const BudgetError*>(&e) != nullptr) return kExitBudget;
  return kExitContract;
}

}  // namespace toksim

#endif  // TOKSIM_ERRORS_HPP_
