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

#include "superhedge/cones.hpp"

#include <cmath>
#include <string>

#include "superhedge/lp.hpp"

namespace superhedge::cones {

ConeRepr make_solvency_cone(double pi12, double pi21) {
  if (!(pi12 > 0.0) || !(pi21 > 0.0) || !std::isfinite(pi12) || !std::isfinite(pi21)) {
    throw FrictionViolation("bid-ask quotes must be positive and finite");
  }
  if (!(pi12 * pi21 > 1.0)) {
    throw FrictionViolation("efficient frictions violated: pi12 * pi21 = " +
                            std::to_string(pi12 * pi21) + " <= 1");
  }
  ConeRepr cone;
  cone.pi12 = pi12;
  cone.pi21 = pi21;
  cone.generators[kCash] = {1.0, 0.0};
  cone.generators[kFuel] = {0.0, 1.0};
  cone.generators[kBuyFuel] = {pi12, -1.0};
  cone.generators[kSellFuel] = {-1.0, pi21};
  return cone;
}

bool contains(const ConeRepr& cone, const Vec2& v) {
  lp::LPProblem problem(4);
  std::vector<double> cash_row(4), fuel_row(4);
  for (int g = 0; g < 4; ++g) {
    cash_row[g] = cone.generators[g].cash;
    fuel_row[g] = cone.generators[g].fuel;
  }
  problem.add_constraint(cash_row, lp::Relation::kEqual, v.cash);
  problem.add_constraint(fuel_row, lp::Relation::kEqual, v.fuel);
  return lp::solve_lp(problem).optimal();
}

bool dominates(const Vec2& v, const Vec2& w, const ConeRepr& cone) {
  return contains(cone, v - w);
}

bool dual_contains(double pi12, double pi21, const Vec2& y) {
  if (y.cash < 0.0 || y.fuel < 0.0) return false;
  return dot(y, {pi12, -1.0}) >= 0.0 && dot(y, {-1.0, pi21}) >= 0.0;
}

bool dual_contains_ratio(double pi12, double pi21, const Vec2& y) {
  if (y.cash < 0.0 || y.fuel < 0.0) return false;
  if (y.fuel == 0.0) return y.cash == 0.0;  // only the origin sits on the fuel axis
  const double ratio = y.cash / y.fuel;
  return 1.0 / pi12 <= ratio && ratio <= pi21;
}

double liquidation_value(double pi12, double pi21, double fuel) {
  return fuel >= 0.0 ? fuel / pi21 : pi12 * fuel;
}

}  // namespace superhedge::cones
