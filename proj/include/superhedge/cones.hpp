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
#include <stdexcept>

#include "superhedge/vec2.hpp"

// Solvency cones of the two-asset (cash, fuel) market with proportional
// transaction costs.
//
// With bid-ask quotes pi12 (cash paid per unit of fuel bought) and pi21 (fuel
// paid per unit of cash bought) the solvency cone is
//
//   K = cone{ e1, e2, pi12 e1 - e2, pi21 e2 - e1 },
//
// trades live in -K, and v >= w ("v dominates w") means v - w in K. The cone
// is proper exactly when pi12 * pi21 > 1.
namespace superhedge::cones {

class FrictionViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum Generator : int { kCash = 0, kFuel = 1, kBuyFuel = 2, kSellFuel = 3 };

struct ConeRepr {
  double pi12 = 0.0;
  double pi21 = 0.0;
  // Indexed by Generator.
  std::array<Vec2, 4> generators{};
};

// Throws FrictionViolation unless pi12 > 0, pi21 > 0 and pi12 * pi21 > 1.
ConeRepr make_solvency_cone(double pi12, double pi21);

// v in K, decided by a four-variable LP feasibility problem.
bool contains(const ConeRepr& cone, const Vec2& v);

// v >= w in the order induced by K.
bool dominates(const Vec2& v, const Vec2& w, const ConeRepr& cone);

// y in K*: y >= 0 and y . g >= 0 for every generator g.
bool dual_contains(double pi12, double pi21, const Vec2& y);

// The same test for strictly positive y, stated on the cash/fuel ratio:
// 1/pi12 <= y.cash / y.fuel <= pi21.
bool dual_contains_ratio(double pi12, double pi21, const Vec2& y);

// Cash obtained by liquidating a fuel holding at the quotes (negative for a
// short position, which must be bought back at pi12).
double liquidation_value(double pi12, double pi21, double fuel);

}  // namespace superhedge::cones
