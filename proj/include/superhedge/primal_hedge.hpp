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
#include <stdexcept>
#include <vector>

#include "superhedge/lp.hpp"
#include "superhedge/market_tree.hpp"
#include "superhedge/vec2.hpp"

// Super-replication of a claim by an investment-production strategy: the
// least initial cash from which trading in -K at every node, plus fuel
// injections into the plant, ends solvent against the claim at every leaf.
//
// Production outcomes are measured against the idle outcome sum R(0): fixed
// costs are carried by the plant whether or not the claim is sold, so they
// are not part of the claim's price.
namespace superhedge::hedge {

class LPInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class LPUnbounded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct HedgeStrategy {
  double endowment = 0.0;
  // Per node: nonnegative weights on the negated generators (cash, fuel,
  // buy-fuel, sell-fuel) and the resulting trade vector.
  std::vector<std::array<double, 4>> weights;
  std::vector<Vec2> trades;
  // Per node: fuel injected into the plant (production parents only).
  std::vector<std::optional<double>> beta;
};

struct LPStats {
  lp::Status status = lp::Status::kOptimal;
  std::size_t iterations = 0;
  std::size_t variables = 0;
  std::size_t constraints = 0;
};

struct PriceResult {
  double price = 0.0;
  HedgeStrategy strategy;
  LPStats lp_stats;
  // Smallest solvency margin (cash + liquidation value of fuel) of the
  // replayed terminal position against the payoff, over all leaves.
  double replay_margin = 0.0;
};

lp::LPProblem build_hedge_lp(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                             bool production_enabled);

PriceResult superreplication_price(const tree::ScenarioTree& tree,
                                   const tree::ContingentClaim& claim, bool production_enabled);

// Replays a strategy through the wealth recursion, independently of the LP,
// and returns the worst terminal solvency margin against `claim`.
double replay_margin(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                     const HedgeStrategy& strategy);

// Terminal positions of a replayed strategy, indexed by node (leaves used).
std::vector<Vec2> replay_terminal(const tree::ScenarioTree& tree, const HedgeStrategy& strategy);

// Exhaustive search over gridded fuel holdings and injections (step
// `grid_step`), liquidating exactly at the leaves. Any gridded strategy is
// feasible, so the result bounds the LP price from above. Trees with more than
// two periods or more than three children per node throw InstanceTooLarge.
double brute_force_price(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                         double grid_step, bool production_enabled);

}  // namespace superhedge::hedge
