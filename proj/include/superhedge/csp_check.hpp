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
#include <vector>

#include "superhedge/market_tree.hpp"
#include "superhedge/production.hpp"

// Conditional-sure-profit audits: does every strategy that dominates the idle
// production outcome use a bounded production regime?
namespace superhedge::csp {

class MissingPlantData : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Status { kBounded, kUnbounded };

// Closed-form analysis of the per-node sure-profit inequality
//   R1(b) + gamma >= (R2(b) - b - c(0)) / pi12
// over b >= 0. Both sides are piecewise linear with kinks at the maintenance
// breakpoints and constant beyond capacity.
struct NodeVerdict {
  Status status = Status::kBounded;
  // sup of the injections satisfying the inequality (bounded case).
  double sup_injection = 0.0;
  // Left- and right-hand sides beyond capacity (the unbounded witness).
  double tail_lhs = 0.0;
  double tail_rhs = 0.0;
};

NodeVerdict check_node_arbitrage(const production::ThermalStep& step, double pi12);
// Same, for the plant and quotes at a tree node; throws MissingPlantData if
// the node carries no plant or no spot price.
NodeVerdict check_node_arbitrage(const tree::ScenarioTree& tree, std::size_t node);

struct NodeDetail {
  std::string node_id;
  NodeVerdict verdict;
};

struct CspVerdict {
  Status status = Status::kBounded;
  // Maximum of the summed injections over dominating strategies.
  double bound = 0.0;
  // Unbounded: per production parent, the injection growth along the ray.
  std::vector<std::pair<std::string, double>> witness;
  std::vector<NodeDetail> nodes;
  std::size_t lp_iterations = 0;
};

// Maximizes the summed fuel injection from time index `start_index` on, over
// strategies whose terminal position dominates the idle outcome sum R(0)
// leafwise in the solvency order.
CspVerdict check_csp_tree(const tree::ScenarioTree& tree, int start_index);

// All start indices 0..N-1; the first unbounded one wins, otherwise the
// largest bound is returned.
CspVerdict check_csp(const tree::ScenarioTree& tree);

}  // namespace superhedge::csp
