// Copyright 2026 The rcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RCL_CLI_RUN_HPP
#define RCL_CLI_RUN_HPP

#include <iosfwd>

#include "rcl/cli/config.hpp"

namespace rcl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

/// Runs one experiment. Reports go to config.output (or `out`); errors are
/// written to `err` as {"error": ..., "message": ...}.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand plus flags, optionally --config FILE) and runs.
int run_command_line(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rcl::cli

#endif  // RCL_CLI_RUN_HPP
