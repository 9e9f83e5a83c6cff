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

#ifndef TOKSIM_CLI_HPP_
#define TOKSIM_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace toksim {

// The whole command surface, callable in process for tests. args excludes
// the program name. Returns the process exit code: 0 success, 1 usage,
// 2 contract/integrity violation, 3 budget exceeded.
int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err);

}  // namespace toksim

#endif  // TOKSIM_CLI_HPP_
