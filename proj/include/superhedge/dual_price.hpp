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
#include <stdexcept>
#include <string>
#include <vector>

#include "superhedge/lp.hpp"
#include "superhedge/market_tree.hpp"
#include "superhedge/vec2.hpp"

// Dual pricing with consistent price systems: positive martingales Z that
// stay inside the dual solvency cones. A claim is priced as
//
//   sup_Z  E[Z_T . H] - (alpha(Z) - alpha_idle(Z)),
//
// where alpha(Z) is the support function of the attainable production
// outcomes and alpha_idle(Z) its value for the idle regime.
namespace superhedge::dual {

class InvalidPriceSystem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
// No price system fits inside the epsilon-tightened dual cones.
class LPInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class MissingSpot : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Per node (Z1, Z2).
struct PriceSystem {
  std::vector<Vec2> z;
};

// Describes the first violated invariant (positivity, cash/fuel ratio within
// [1/pi12, pi21], martingale property, Z1 = 1 at the root), if any.
std::optional<std::string> price_system_violation(const tree::ScenarioTree& tree,
                                                  const PriceSystem& z, double tol = 1e-10);

struct SupportValue {
  // sup over regimes of E[sum Z1 (P q min(b, D) - gamma) + Z2 (c(min(b, D)) - min(b, D))].
  double alpha = 0.0;
  // The same expectation at the idle regime b = 0.
  double alpha_idle = 0.0;
  // Maximizing injection per production parent.
  std::vector<std::optional<double>> regimes;

  double excess() const { return alpha - alpha_idle; }
};

SupportValue alpha_support(const tree::ScenarioTree& tree, const PriceSystem& z,
                           bool production_enabled);

struct DualOptions {
  bool production_enabled = true;
  // Price margin: 1/pi21 + ratio_margin <= Z2/Z1 <= pi12 - ratio_margin.
  double ratio_margin = 1e-6;
  // Lower bound on both components of Z.
  double positivity_margin = 1e-8;
};

struct DualResult {
  double value = 0.0;
  PriceSystem price_system;
  // alpha - alpha_idle at the optimal price system.
  double support_excess = 0.0;
  std::size_t lp_iterations = 0;
};

// Columns: (Z1, Z2) per node in node order, then one epigraph variable per
// production parent.
lp::LPProblem build_dual_lp(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                            const DualOptions& options = {});

DualResult dual_price(const tree::ScenarioTree& tree, const tree::ContingentClaim& claim,
                      const DualOptions& options = {});

// Cash-settled delivery of x MW at every date t_1..t_N: the leaf payoff is
// x times the spot prices summed along the path, carried at zero interest.
tree::ContingentClaim power_futures_claim(const tree::ScenarioTree& tree, double power);

DualResult power_futures_price(const tree::ScenarioTree& tree, double power,
                               const DualOptions& options = {});

}  // namespace superhedge::dual
