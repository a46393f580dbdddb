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

#include "superhedge/dual_price.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "strategy_lp.hpp"
#include "superhedge/cones.hpp"
#include "superhedge/production.hpp"

namespace superhedge::dual {
namespace {

std::string node_msg(const tree::ScenarioTree& tree, std::size_t i, const std::string& what) {
  return "node " + tree.node(i).id + ": " + what;
}

// Injection levels at which some child's gain has a kink (plus 0). The
// expected gain is piecewise linear in b and constant past the largest
// capacity, so its supremum is attained on this set.
std::vector<double> candidate_regimes(const tree::ScenarioTree& tree, std::size_t parent) {
  std::vector<double> b{0.0};
  for (std::size_t c : tree.children(parent)) {
    for (double z : production::regime_breakpoints(tree.thermal_step(c))) b.push_back(z);
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<std::size_t> production_parents(const tree::ScenarioTree& tree, bool production) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    if (tree.is_leaf(i)) continue;
    if (detail::production_step_active(tree, tree.node(i).time_index + 1, production)) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

std::optional<std::string> price_system_violation(const tree::ScenarioTree& tree,
                                                  const PriceSystem& z, double tol) {
  if (z.z.size() != tree.size()) {
    std::ostringstream os;
    os << "price system has " << z.z.size() << " entries, tree has " << tree.size() << " nodes";
    return os.str();
  }
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const Vec2& y = z.z[i];
    if (!std::isfinite(y.cash) || !std::isfinite(y.fuel)) return node_msg(tree, i, "not finite");
    if (y.cash <= 0.0 || y.fuel <= 0.0) return node_msg(tree, i, "not strictly positive");
    const tree::Node& n = tree.node(i);
    // Ratio bounds, scaled so that the tolerance is absolute in Z.
    if (n.pi12 * y.cash - y.fuel < -tol || n.pi21 * y.fuel - y.cash < -tol) {
      return node_msg(tree, i, "outside the dual solvency cone");
    }
    if (!tree.is_leaf(i)) {
      Vec2 expect;
      for (std::size_t c : tree.children(i)) expect = expect + tree.node(c).cond_prob * z.z[c];
      if (std::abs(expect.cash - y.cash) > tol || std::abs(expect.fuel - y.fuel) > tol) {
        return node_msg(tree, i, "martingale property fails");
      }
    }
  }
  if (std::abs(z.z[tree.root()].cash - 1.0) > tol) return std::string("Z1 at the root is not 1");
  return std::nullopt;
}

SupportValue alpha_support(const tree::ScenarioTree& tree, const PriceSystem& z,
                           bool production_enabled) {
  if (auto why = price_system_violation(tree, z)) throw InvalidPriceSystem(*why);
  SupportValue out;
  out.regimes.assign(tree.size(), std::nullopt);
  for (std::size_t p : production_parents(tree, production_enabled)) {
    const std::vector<std::size_t>& kids = tree.children(p);
    auto expected = [&](double b) {
      double total = 0.0;
      for (std::size_t c : kids) {
        const production::ThermalStep step = tree.thermal_step(c);
        const Vec2 r = production::thermal_output(step, b) - Vec2{0.0, b};
        total += node_probability(tree, c) * dot(z.z[c], r);
      }
      return total;
    };
    double best = -lp::kInfinity;
    double arg = 0.0;
    for (double b : candidate_regimes(tree, p)) {
      const double v = expected(b);
      if (v > best + 1e-12) {
        best = v;
        arg = b;
      }
    }
    out.alpha += best;
    out.alpha_idle += expected(0.0);
    out.regimes[p] = arg;
  }
  return out;
}

namespace {

struct DualLP {
  lp::LPProblem problem;
  std::vector<std::array<std::size_t, 2>> col;
  std::vector<std::size_t> s_col;
};

DualLP build(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
             const DualOptions& options) {
  if (!(options.ratio_margin >= 0.0) || !(options.positivity_margin >= 0.0)) {
    throw std::invalid_argument("dual_price: margins must be nonnegative");
  }
  if (claim.payoffs.size() != tree.size()) {
    throw std::invalid_argument("dual_price: claim does not match the tree");
  }
  const std::size_t n = tree.size();
  lp::LPProblem problem(0, lp::Sense::kMaximize);

  std::vector<std::array<std::size_t, 2>> col(n);
  for (std::size_t i = 0; i < n; ++i) {
    double obj_cash = 0.0, obj_fuel = 0.0;
    if (tree.is_leaf(i)) {
      const double p = node_probability(tree, i);
      obj_cash = p * claim.payoffs[i].cash;
      obj_fuel = p * claim.payoffs[i].fuel;
    }
    lp::Bounds pos{options.positivity_margin, lp::kInfinity};
    col[i] = {problem.add_variable(obj_cash, i == tree.root() ? lp::Bounds::fixed(1.0) : pos),
              problem.add_variable(obj_fuel, pos)};
  }

  auto row = [&] { return std::vector<double>(problem.num_variables(), 0.0); };

  for (std::size_t i = 0; i < n; ++i) {
    const tree::Node& node = tree.node(i);
    std::vector<double> lo = row(), hi = row();
    // Fuel priced in cash, Z2/Z1, strictly inside the bid-ask interval
    // [1/pi21, pi12]; the margin is a price tick.
    lo[col[i][1]] = 1.0;
    lo[col[i][0]] = -(1.0 / node.pi21 + options.ratio_margin);
    hi[col[i][1]] = -1.0;
    hi[col[i][0]] = node.pi12 - options.ratio_margin;
    problem.add_constraint(std::move(lo), lp::Relation::kGreaterEqual, 0.0);
    problem.add_constraint(std::move(hi), lp::Relation::kGreaterEqual, 0.0);
    if (tree.is_leaf(i)) continue;
    for (int k = 0; k < 2; ++k) {
      std::vector<double> m = row();
      m[col[i][k]] = 1.0;
      for (std::size_t c : tree.children(i)) m[col[c][k]] -= tree.node(c).cond_prob;
      problem.add_constraint(std::move(m), lp::Relation::kEqual, 0.0);
    }
  }

  // Epigraph of the idle-relative support function, one s per production parent.
  const std::vector<std::size_t> parents = production_parents(tree, options.production_enabled);
  std::vector<std::size_t> s_col;
  for (std::size_t p : parents) {
    for (std::size_t c : tree.children(p)) {
      // Same admissibility rule as the primal encoding.
      production::idle_relative_gain_pieces(tree.thermal_step(c));
    }
    const std::size_t s = problem.add_variable(-1.0, lp::Bounds::free());
    s_col.push_back(s);
    for (double b : candidate_regimes(tree, p)) {
      std::vector<double> e = row();
      e[s] = 1.0;
      for (std::size_t c : tree.children(p)) {
        const Vec2 g = production::idle_relative_gain(tree.thermal_step(c), b);
        const double pc = node_probability(tree, c);
        e[col[c][0]] -= pc * g.cash;
        e[col[c][1]] -= pc * g.fuel;
      }
      problem.add_constraint(std::move(e), lp::Relation::kGreaterEqual, 0.0);
    }
  }

  return {std::move(problem), std::move(col), std::move(s_col)};
}

}  // namespace

lp::LPProblem build_dual_lp(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                            const DualOptions& options) {
  return build(tree, claim, options).problem;
}

DualResult dual_price(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                      const DualOptions& options) {
  const std::size_t n = tree.size();
  auto [problem, col, s_col] = build(tree, claim, options);
  const lp::LPSolution sol = lp::solve_lp(problem);
  if (sol.status == lp::Status::kInfeasible) {
    throw LPInfeasible("no price system inside the tightened dual cones");
  }
  if (sol.status == lp::Status::kUnbounded) {
    throw std::runtime_error("dual_price: dual LP unbounded");
  }
  DualResult out;
  out.value = *sol.value;
  out.lp_iterations = sol.iterations;
  out.price_system.z.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.price_system.z[i] = {sol.primal[col[i][0]], sol.primal[col[i][1]]};
  }
  for (std::size_t s : s_col) out.support_excess += sol.primal[s];
  return out;
}

tree::ContingentClaim power_futures_claim(const tree::ScenarioTree& tree, double power) {
  if (!std::isfinite(power) || power < 0.0) {
    throw std::invalid_argument("power_futures_claim: power must be nonnegative");
  }
  std::vector<Vec2> payoffs(tree.size());
  for (std::size_t leaf : tree.leaves()) {
    double total = 0.0;
    for (std::size_t i : tree.path_from_root(leaf)) {
      if (i == tree.root()) continue;
      const tree::Node& node = tree.node(i);
      if (!node.spot_power) throw MissingSpot("node " + node.id + " has no spot power price");
      total += *node.spot_power;
    }
    payoffs[leaf] = {power * total, 0.0};
  }
  return tree::make_claim(tree, std::move(payoffs));
}

DualResult power_futures_price(const tree::ScenarioTree& tree, double power,
                               const DualOptions& options) {
  return dual_price(tree, power_futures_claim(tree, power), options);
}

}  // namespace superhedge::dual
