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

#include "superhedge/csp_check.hpp"

#include <algorithm>

#include "strategy_lp.hpp"

namespace superhedge::csp {

namespace {

constexpr double kRayTol = 1e-9;

double sure_profit_gap(const production::ThermalStep& step, double pi12, double beta) {
  const Vec2 r = production::thermal_output(step, beta);
  const double c0 = step.plant.maintenance(0.0);
  return (r.cash + step.plant.fixed_cost) - (r.fuel - beta - c0) / pi12;
}

}  // namespace

NodeVerdict check_node_arbitrage(const production::ThermalStep& step, double pi12) {
  if (step.plant.maintenance.breakpoints().empty()) {
    throw MissingPlantData("plant step has no maintenance curve");
  }
  const std::vector<double> kinks = production::regime_breakpoints(step);
  NodeVerdict v;
  const double cap = step.plant.capacity;
  const Vec2 tail = production::thermal_output(step, cap);
  v.tail_lhs = tail.cash + step.plant.fixed_cost;
  v.tail_rhs = (tail.fuel - cap - step.plant.maintenance(0.0)) / pi12;
  if (v.tail_lhs >= v.tail_rhs) {
    v.status = Status::kUnbounded;
    return v;
  }
  // The gap is affine between kinks and negative at capacity; the largest
  // admissible injection is the last zero crossing (the gap vanishes at 0).
  std::vector<double> gap(kinks.size());
  for (std::size_t j = 0; j < kinks.size(); ++j) gap[j] = sure_profit_gap(step, pi12, kinks[j]);
  for (std::size_t j = kinks.size() - 1; j-- > 0;) {
    if (gap[j] >= 0.0) {
      v.sup_injection = kinks[j] + (kinks[j + 1] - kinks[j]) * gap[j] / (gap[j] - gap[j + 1]);
      return v;
    }
  }
  v.sup_injection = 0.0;
  return v;
}

NodeVerdict check_node_arbitrage(const tree::ScenarioTree& tree, std::size_t node) {
  const tree::Node& n = tree.node(node);
  if (!n.plant || !n.spot_power) throw MissingPlantData("node " + n.id + " has no plant data");
  return check_node_arbitrage(tree.thermal_step(node), n.pi12);
}

CspVerdict check_csp_tree(const tree::ScenarioTree& tree, int start_index) {
  CspVerdict verdict;
  for (std::size_t c = 0; c < tree.size(); ++c) {
    const auto parent = tree.parent(c);
    if (!parent || tree.node(*parent).time_index < start_index) continue;
    if (!tree.is_production_step(tree.node(c).time_index)) continue;
    verdict.nodes.push_back({tree.node(c).id, check_node_arbitrage(tree, c)});
  }

  const std::vector<Vec2> idle(tree.size());
  const detail::StrategyLP built = detail::build_strategy_lp(tree, idle, start_index, true, false);
  const lp::LPSolution sol = lp::solve_lp(built.problem);
  verdict.lp_iterations = sol.iterations;
  if (sol.status == lp::Status::kUnbounded) {
    verdict.status = Status::kUnbounded;
    for (std::size_t i = 0; i < tree.size(); ++i) {
      if (!built.layout.beta[i]) continue;
      const double growth = sol.ray[*built.layout.beta[i]];
      if (growth > kRayTol) verdict.witness.emplace_back(tree.node(i).id, growth);
    }
    return verdict;
  }
  if (sol.status == lp::Status::kInfeasible) {
    throw std::runtime_error("CSP LP infeasible: the idle strategy should always be feasible");
  }
  verdict.bound = std::max(0.0, *sol.value);
  return verdict;
}

CspVerdict check_csp(const tree::ScenarioTree& tree) {
  CspVerdict overall;
  for (int k = 0; k < tree.num_periods(); ++k) {
    CspVerdict v = check_csp_tree(tree, k);
    if (k == 0) overall.nodes = v.nodes;
    overall.lp_iterations += v.lp_iterations;
    if (v.status == Status::kUnbounded) {
      v.nodes = overall.nodes;
      v.lp_iterations = overall.lp_iterations;
      return v;
    }
    overall.bound = std::max(overall.bound, v.bound);
  }
  return overall;
}

}  // namespace superhedge::csp
