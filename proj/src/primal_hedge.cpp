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

#include "superhedge/primal_hedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "strategy_lp.hpp"
#include "superhedge/cones.hpp"
#include "superhedge/production.hpp"

namespace superhedge::hedge {

namespace {

void check_inputs(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                  bool production_enabled) {
  if (claim.payoffs.size() != tree.size()) {
    throw tree::SchemaError("claim payoffs must be indexed by node");
  }
  if (production_enabled) {
    const bool any_plant = std::any_of(tree.nodes().begin(), tree.nodes().end(),
                                       [](const tree::Node& n) { return n.plant.has_value(); });
    if (!any_plant) throw tree::SchemaError("production enabled without plant data");
  }
}

}  // namespace

lp::LPProblem build_hedge_lp(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                             bool production_enabled) {
  check_inputs(tree, claim, production_enabled);
  return detail::build_strategy_lp(tree, claim.payoffs, 0, production_enabled, true).problem;
}

PriceResult superreplication_price(const tree::ScenarioTree& tree,
                                   const tree::ContingentClaim& claim, bool production_enabled) {
  check_inputs(tree, claim, production_enabled);
  const detail::StrategyLP built =
      detail::build_strategy_lp(tree, claim.payoffs, 0, production_enabled, true);
  const lp::LPSolution sol = lp::solve_lp(built.problem);
  if (sol.status == lp::Status::kInfeasible) {
    throw LPInfeasible("internal error: hedging LP infeasible for a claim with finite kappa");
  }
  if (sol.status == lp::Status::kUnbounded) {
    throw LPUnbounded("hedging LP unbounded: the instance admits an arbitrage");
  }

  PriceResult result;
  const auto& layout = built.layout;
  result.price = *sol.value;
  result.lp_stats = {sol.status, sol.iterations, built.problem.num_variables(),
                     built.problem.num_constraints()};
  HedgeStrategy& s = result.strategy;
  s.endowment = sol.primal[*layout.endowment];
  s.weights.assign(tree.size(), {0.0, 0.0, 0.0, 0.0});
  s.trades.assign(tree.size(), Vec2{});
  s.beta.assign(tree.size(), std::nullopt);
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (layout.trade[i]) {
      const auto cone = cones::make_solvency_cone(tree.node(i).pi12, tree.node(i).pi21);
      for (int g = 0; g < 4; ++g) {
        const double w = std::max(0.0, sol.primal[(*layout.trade[i])[g]]);
        s.weights[i][g] = w;
        s.trades[i] -= w * cone.generators[g];
      }
    }
    if (layout.beta[i]) s.beta[i] = std::max(0.0, sol.primal[*layout.beta[i]]);
  }
  result.replay_margin = replay_margin(tree, claim, s);
  return result;
}

std::vector<Vec2> replay_terminal(const tree::ScenarioTree& tree, const HedgeStrategy& strategy) {
  std::vector<Vec2> terminal(tree.size());
  for (std::size_t leaf : tree.leaves()) {
    Vec2 v{strategy.endowment, 0.0};
    for (std::size_t n : tree.path_from_root(leaf)) {
      v += strategy.trades[n];
      const auto parent = tree.parent(n);
      if (parent && strategy.beta[*parent]) {
        v += production::idle_relative_gain(tree.thermal_step(n), *strategy.beta[*parent]);
      }
    }
    terminal[leaf] = v;
  }
  return terminal;
}

double replay_margin(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                     const HedgeStrategy& strategy) {
  const std::vector<Vec2> terminal = replay_terminal(tree, strategy);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t leaf : tree.leaves()) {
    const tree::Node& n = tree.node(leaf);
    const Vec2 surplus = terminal[leaf] - claim.payoffs[leaf];
    worst = std::min(worst, surplus.cash + cones::liquidation_value(n.pi12, n.pi21, surplus.fuel));
  }
  return worst;
}

namespace {

// Gridded dynamic program over the fuel holding carried into each node; cash
// is additive along a path and enters through the endowment only.
class GridSearch {
 public:
  GridSearch(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim, double step,
             bool production)
      : tree_(tree), claim_(claim), step_(step), production_(production) {
    double range = 1.0;
    for (std::size_t leaf : tree.leaves()) {
      range = std::max(range, std::abs(claim.payoffs[leaf].fuel) + 1.0);
    }
    for (int t = 1; t <= tree.num_periods(); ++t) {
      if (!detail::production_step_active(tree, t, production)) continue;
      double widest = 0.0;
      for (std::size_t c : tree.nodes_at(t)) {
        const auto ts = tree.thermal_step(c);
        widest = std::max(widest, ts.plant.capacity +
                                      std::abs(production::idle_relative_gain(ts, ts.plant.capacity).fuel));
      }
      range += widest;
    }
    half_ = static_cast<long>(std::ceil(range / step_));
    grid_.resize(static_cast<std::size_t>(2 * half_ + 1));
    for (long k = -half_; k <= half_; ++k) grid_[static_cast<std::size_t>(k + half_)] = k * step_;
    held_.resize(tree.size());
    prefix_.resize(tree.size());
    suffix_.resize(tree.size());
  }

  double price() {
    for (int t = tree_.num_periods() - 1; t >= 1; --t) {
      for (std::size_t n : tree_.nodes_at(t)) tabulate(n);
    }
    const std::size_t root = tree_.root();
    if (tree_.is_leaf(root)) return leaf_need(root, 0.0);
    const std::vector<double> hold = held_value(root);
    const tree::Node& r = tree_.node(root);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid_.size(); ++k) {
      best = std::min(best, trade_cost(r, grid_[k]) + hold[k]);
    }
    return best;
  }

 private:
  // Cash paid to move the fuel holding by d (negative when selling).
  static double trade_cost(const tree::Node& n, double d) {
    return -cones::liquidation_value(n.pi12, n.pi21, -d);
  }

  double leaf_need(std::size_t leaf, double fuel) const {
    const tree::Node& n = tree_.node(leaf);
    const Vec2& h = claim_.payoffs[leaf];
    return h.cash - cones::liquidation_value(n.pi12, n.pi21, fuel - h.fuel);
  }

  // Cash needed at node n when it is entered holding `fuel`.
  double need(std::size_t n, double fuel) const {
    if (tree_.is_leaf(n)) return leaf_need(n, fuel);
    const tree::Node& node = tree_.node(n);
    // Buying up to grid point f >= fuel costs pi12 (f - fuel); selling down to
    // f <= fuel yields (fuel - f) / pi21.
    const double pos = (fuel + half_ * step_) / step_;
    const long up = std::clamp(static_cast<long>(std::ceil(pos - 1e-9)), 0L, 2 * half_ + 1);
    const long down = std::clamp(static_cast<long>(std::floor(pos + 1e-9)), -1L, 2 * half_);
    double best = std::numeric_limits<double>::infinity();
    if (up <= 2 * half_) best = suffix_[n][static_cast<std::size_t>(up)] - node.pi12 * fuel;
    if (down >= 0) {
      best = std::min(best, prefix_[n][static_cast<std::size_t>(down)] - fuel / node.pi21);
    }
    return best;
  }

  std::vector<double> injection_grid(std::size_t n) const {
    std::vector<double> levels{0.0};
    if (!detail::production_step_active(tree_, tree_.node(n).time_index + 1, production_)) {
      return levels;
    }
    double cap = 0.0;
    for (std::size_t c : tree_.children(n)) {
      const auto ts = tree_.thermal_step(c);
      cap = std::max(cap, ts.plant.capacity);
      for (double b : production::regime_breakpoints(ts)) levels.push_back(b);
    }
    for (long k = 1; k * step_ <= cap; ++k) levels.push_back(k * step_);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
  }

  // Cash needed after trading to each grid holding, minimized over injections.
  std::vector<double> held_value(std::size_t n) const {
    const std::vector<double> levels = injection_grid(n);
    const bool producing = levels.size() > 1;
    std::vector<double> out(grid_.size(), std::numeric_limits<double>::infinity());
    for (double beta : levels) {
      std::vector<std::pair<std::size_t, Vec2>> gains;
      for (std::size_t c : tree_.children(n)) {
        gains.emplace_back(c, producing ? production::idle_relative_gain(tree_.thermal_step(c), beta)
                                        : Vec2{});
      }
      for (std::size_t k = 0; k < grid_.size(); ++k) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& [c, g] : gains) worst = std::max(worst, need(c, grid_[k] + g.fuel) - g.cash);
        out[k] = std::min(out[k], worst);
      }
    }
    return out;
  }

  void tabulate(std::size_t n) {
    held_[n] = held_value(n);
    const tree::Node& node = tree_.node(n);
    const std::size_t m = grid_.size();
    prefix_[n].assign(m, 0.0);
    suffix_[n].assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
      const double b = grid_[k] / node.pi21 + held_[n][k];
      prefix_[n][k] = k == 0 ? b : std::min(prefix_[n][k - 1], b);
    }
    for (std::size_t k = m; k-- > 0;) {
      const double a = node.pi12 * grid_[k] + held_[n][k];
      suffix_[n][k] = k + 1 == m ? a : std::min(suffix_[n][k + 1], a);
    }
  }

  const tree::ScenarioTree& tree_;
  const tree::ContingentClaim& claim_;
  double step_;
  bool production_;
  long half_ = 0;
  std::vector<double> grid_;
  std::vector<std::vector<double>> held_;
  std::vector<std::vector<double>> prefix_;
  std::vector<std::vector<double>> suffix_;
};

}  // namespace

double brute_force_price(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                         double grid_step, bool production_enabled) {
  check_inputs(tree, claim, production_enabled);
  if (!(grid_step > 0.0)) throw std::invalid_argument("grid_step must be positive");
  if (tree.num_periods() > 2) throw InstanceTooLarge("brute force supports at most 2 periods");
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.children(i).size() > 3) {
      throw InstanceTooLarge("brute force supports at most 3 children per node");
    }
  }
  GridSearch search(tree, claim, grid_step, production_enabled);
  return search.price();
}

}  // namespace superhedge::hedge
