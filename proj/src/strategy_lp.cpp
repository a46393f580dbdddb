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

#include "strategy_lp.hpp"

#include "superhedge/cones.hpp"
#include "superhedge/production.hpp"

namespace superhedge::detail {

bool production_step_active(const tree::ScenarioTree& tree, int time_index, bool production) {
  return production && tree.is_production_step(time_index);
}

StrategyLP build_strategy_lp(const tree::ScenarioTree& tree, const std::vector<Vec2>& payoffs,
                             int start_index, bool production, bool with_endowment) {
  const std::size_t n = tree.size();
  StrategyLP out{lp::LPProblem(0, with_endowment ? lp::Sense::kMinimize : lp::Sense::kMaximize),
                 {}};
  lp::LPProblem& problem = out.problem;
  StrategyLayout& layout = out.layout;
  layout.trade.resize(n);
  layout.beta.resize(n);
  layout.gain.resize(n);
  layout.leaf_rows.resize(n);
  layout.hypograph_rows.resize(n);

  if (with_endowment) layout.endowment = problem.add_variable(1.0, lp::Bounds::free());

  std::vector<cones::ConeRepr> cone(n);
  for (std::size_t i = 0; i < n; ++i) {
    const tree::Node& node = tree.node(i);
    cone[i] = cones::make_solvency_cone(node.pi12, node.pi21);
    if (node.time_index < start_index) continue;
    std::array<std::size_t, 4> cols{};
    for (auto& c : cols) c = problem.add_variable();
    layout.trade[i] = cols;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const tree::Node& node = tree.node(i);
    if (node.time_index < start_index || tree.is_leaf(i)) continue;
    if (!production_step_active(tree, node.time_index + 1, production)) continue;
    layout.beta[i] = problem.add_variable(with_endowment ? 0.0 : 1.0);
    for (std::size_t c : tree.children(i)) {
      layout.gain[c] = {problem.add_variable(0.0, lp::Bounds::free()),
                        problem.add_variable(0.0, lp::Bounds::free())};
    }
  }

  for (std::size_t c = 0; c < n; ++c) {
    if (!layout.gain[c]) continue;
    const std::size_t beta = *layout.beta[*tree.parent(c)];
    const production::GainPieces pieces =
        production::idle_relative_gain_pieces(tree.thermal_step(c));
    for (int leg = 0; leg < 2; ++leg) {
      for (const auto& piece : leg == 0 ? pieces.cash : pieces.fuel) {
        std::vector<double> row(problem.num_variables(), 0.0);
        row[(*layout.gain[c])[leg]] = 1.0;
        row[beta] = -piece.slope;
        layout.hypograph_rows[c].push_back(
            problem.add_constraint(std::move(row), lp::Relation::kLessEqual, piece.intercept));
      }
    }
  }

  for (std::size_t leaf : tree.leaves()) {
    std::array<std::vector<double>, 2> rows;
    for (auto& r : rows) r.assign(problem.num_variables(), 0.0);
    if (layout.endowment) rows[0][*layout.endowment] = 1.0;
    for (std::size_t v : tree.path_from_root(leaf)) {
      if (layout.trade[v]) {
        for (int g = 0; g < 4; ++g) {
          rows[0][(*layout.trade[v])[g]] -= cone[v].generators[g].cash;
          rows[1][(*layout.trade[v])[g]] -= cone[v].generators[g].fuel;
        }
      }
      if (layout.gain[v]) {
        rows[0][(*layout.gain[v])[0]] += 1.0;
        rows[1][(*layout.gain[v])[1]] += 1.0;
      }
    }
    const Vec2& h = payoffs.at(leaf);
    layout.leaf_rows[leaf] = {
        problem.add_constraint(std::move(rows[0]), lp::Relation::kEqual, h.cash),
        problem.add_constraint(std::move(rows[1]), lp::Relation::kEqual, h.fuel)};
  }
  return out;
}

}  // namespace superhedge::detail
