// Copyright 2026 The Superhedge Authors
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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace superhedge::cli {

enum class Command { kValidate, kCheckAssumptions, kCheckCsp, kPrice, kHedge };
enum class Contract { kClaim, kPowerFutures };
enum class Format { kText, kJson };

struct RunConfig {
  Command command = Command::kValidate;
  std::string tree_path;
  Contract contract = Contract::kClaim;
  double power = 0.0;
  // Unset: on iff some node carries plant data.
  std::optional<bool> production;
  // Ratio margin of the dual LP; unset means 1e-6.
  std::optional<double> eps;
  Format format = Format::kText;
  std::string emit_cps;       // price: optimal price system, keyed by node id
  std::string emit_strategy;  // price/hedge: hedge strategy, keyed by node id
  std::string dump_lp;        // price/hedge: plain-text dump of the primal LP
  std::size_t samples = 10000;  // check-assumptions
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitCspUnbounded = 3;

struct RunResult {
  int exit_code = kExitOk;
  std::string report;
  // One line; set when exit_code == kExitInput.
  std::string diagnostic;
};

std::optional<Command> parse_command(std::string_view name);
const char* to_string(Command command);

// First problem with the flags themselves (not the tree), if any.
std::optional<std::string> config_violation(const RunConfig& config);

RunResult run(const RunConfig& config, std::string_view document);

// %.12g, the fixed float format of every report.
std::string format_number(double x);

}  // namespace superhedge::cli
