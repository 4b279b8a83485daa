// Copyright 2026 The Authors.
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

#ifndef GCNCERT_CLI_HPP_
#define GCNCERT_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace gcncert {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitOracleInfeasible = 3,
};

// Entry point of the command-line tool. `args` excludes the program name.
// CSV output goes to --output when given, otherwise to `out`.
int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace gcncert

#endif  // GCNCERT_CLI_HPP_
