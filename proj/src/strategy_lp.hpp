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

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "superhedge/lp.hpp"
#include "superhedge/market_tree.hpp"
#include "superhedge/vec2.hpp"

namespace superhedge::detail {

// Column layout of an investment-production strategy LP on a tree.
//
// Every node n at or after the start date trades -sum_g weight[n][g] * g over
// the four solvency-cone generators (the e1/e2 weights are free disposal).
// A production parent p injects beta[p] >= 0 fuel; each child c of p receives
// gain[c] <= R_c(beta[p]) - beta[p] e2 - R_c(0), one row per affine piece.
// Each leaf contributes two equality rows
//   [w e1] - sum_path trades + sum_path gains = payoff.
struct StrategyLayout {
  std::optional<std::size_t> endowment;
  std::vector<std::optional<std::array<std::size_t, 4>>> trade;
  std::vector<std::optional<std::size_t>> beta;
  std::vector<std::optional<std::array<std::size_t, 2>>> gain;
  // Per node: the two leaf rows (cash, fuel), leaves only.
  std::vector<std::optional<std::array<std::size_t, 2>>> leaf_rows;
  // Hypograph rows grouped by child node.
  std::vector<std::vector<std::size_t>> hypograph_rows;
};

struct StrategyLP {
  lp::LPProblem problem;
  StrategyLayout layout;
};

// `payoffs` is indexed by node (leaves used). With `with_endowment` the LP
// minimizes the initial cash w; otherwise it maximizes the total injected fuel.
StrategyLP build_strategy_lp(const tree::ScenarioTree& tree, const std::vector<Vec2>& payoffs,
                             int start_index, bool production, bool with_endowment);

// Time indices whose production step is active for the given flag.
bool production_step_active(const tree::ScenarioTree& tree, int time_index, bool production);

}  // namespace superhedge::detail
