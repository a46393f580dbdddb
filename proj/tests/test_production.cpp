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

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "superhedge/production.hpp"
#include "test_support.hpp"

using namespace superhedge;
using namespace superhedge::production;

TEST_CASE("maintenance curve") {
  const PiecewiseConcave c = testing::plant_e().maintenance;
  CHECK(c(0.0) == -100.0);
  CHECK(c(2.5) == doctest::Approx(-55.0));
  CHECK(c(7.5) == doctest::Approx(-6.0));
  CHECK(c.slopes() == std::vector<double>{18.0, 1.6});
  CHECK(c.violations().empty());
  CHECK_THROWS_AS(c(10.5), std::domain_error);
  CHECK_FALSE(PiecewiseConcave({{0.0, -100.0}, {5.0, -95.0}, {10.0, -2.0}}).violations().empty());
  CHECK_FALSE(PiecewiseConcave({{0.0, -1.0}, {5.0, 2.0}}).violations().empty());    // positive value
  CHECK_FALSE(PiecewiseConcave({{0.0, -10.0}, {5.0, -8.0}}).violations().empty());  // last slope < 1
  CHECK_FALSE(PiecewiseConcave({{1.0, -10.0}, {5.0, -1.0}}).violations().empty());  // z0 != 0
}

TEST_CASE("thermal output of plant E") {
  const ThermalStep e = testing::step_e();
  CHECK(thermal_output(e, 0.0) == Vec2{-5.0, -100.0});
  CHECK(thermal_output(e, 5.0) == Vec2{15.0, -10.0});
  const Vec2 over = thermal_output(e, 14.0);
  CHECK(over.cash == doctest::Approx(35.0));
  CHECK(over.fuel == doctest::Approx(2.0));
  CHECK_THROWS_AS(thermal_output(e, -1.0), NegativeRegime);
}

TEST_CASE("production bound") {
  const ThermalStep e = testing::step_e();
  const Vec2 k = production_bound(e);
  CHECK(k.cash == doctest::Approx(45.0));
  CHECK(k.fuel == doctest::Approx(100.0));
  const Vec2 far = thermal_output(e, 1e6) - Vec2{0.0, 1e6};
  CHECK(std::abs(far.fuel) == doctest::Approx(12.0));
  CHECK(std::abs(far.fuel) <= k.fuel);
}

TEST_CASE("plant E passes the sampled checks") {
  const AssumptionReport r = check_assumptions(testing::step_e(), 1000);
  CHECK(r.concavity.passed);
  CHECK(r.boundedness.passed);
  CHECK(r.continuity.passed);
  CHECK(r.symbolic.value_or(false));
  CHECK(r.passed());
  CHECK(r.concavity.checks == 1000);
}

TEST_CASE("convex maintenance fails concavity with a witness") {
  ThermalStep s = testing::step_e();
  s.plant.maintenance = PiecewiseConcave({{0.0, -100.0}, {5.0, -95.0}, {10.0, -2.0}});
  const AssumptionReport r = check_assumptions(s, 1000);
  CHECK_FALSE(r.concavity.passed);
  REQUIRE(r.concavity.witness.has_value());
  const Witness& w = *r.concavity.witness;
  const double mid = w.lambda * w.beta_a + (1.0 - w.lambda) * w.beta_b;
  const Vec2 defect = thermal_output(s, mid) - w.lambda * thermal_output(s, w.beta_a) -
                      (1.0 - w.lambda) * thermal_output(s, w.beta_b);
  CHECK(defect.fuel < -1e-9);
  CHECK_FALSE(thermal_concave_symbolic(s));
}

TEST_CASE("quadratic output fails boundedness") {
  const ProductionFunction quad = [](double b) { return Vec2{b * b, b}; };
  const std::vector<double> kinks;
  SamplingOptions opt;
  opt.beta_max = 10.0;
  opt.samples = 500;
  const AssumptionReport r = check_assumptions(quad, {45.0, 100.0}, kinks, opt);
  CHECK(r.concavity.passed == false);  // b^2 is convex as well
  CHECK_FALSE(r.boundedness.passed);
  REQUIRE(r.boundedness.witness.has_value());
  CHECK(r.boundedness.witness->beta_a * r.boundedness.witness->beta_a > 45.0);
}

TEST_CASE("a jump fails continuity") {
  const ProductionFunction jump = [](double b) { return Vec2{b < 3.0 ? 0.0 : 1.0, b}; };
  const std::vector<double> kinks{3.0};
  SamplingOptions opt;
  opt.samples = 10;
  const AssumptionReport r = check_assumptions(jump, {10.0, 10.0}, kinks, opt);
  CHECK_FALSE(r.continuity.passed);
}

TEST_CASE("regime breakpoints") {
  CHECK(regime_breakpoints(testing::step_e()) == std::vector<double>{0.0, 5.0, 10.0});
}

TEST_CASE("hypograph pieces reproduce the idle-relative gain") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (double spot : {0.0, 8.0, 50.0}) {
    const ThermalStep e = testing::step_e(spot);
    const GainPieces pieces = idle_relative_gain_pieces(e);
    for (int i = 0; i < 200; ++i) {
      const double b = u(rng);
      double cash = INFINITY, fuel = INFINITY;
      for (const AffinePiece& p : pieces.cash) cash = std::min(cash, p.slope * b + p.intercept);
      for (const AffinePiece& p : pieces.fuel) fuel = std::min(fuel, p.slope * b + p.intercept);
      const Vec2 g = idle_relative_gain(e, b);
      CHECK(cash == doctest::Approx(g.cash));
      CHECK(fuel == doctest::Approx(g.fuel));
      const Vec2 direct = thermal_output(e, b) - Vec2{0.0, b} - thermal_output(e, 0.0);
      CHECK(g.cash == doctest::Approx(direct.cash));
      CHECK(g.fuel == doctest::Approx(direct.fuel));
    }
  }
}

TEST_CASE("negative spot makes the cash leg convex") {
  const ThermalStep e = testing::step_e(-4.0);
  CHECK_FALSE(thermal_concave_symbolic(e));
  CHECK_THROWS_AS(idle_relative_gain_pieces(e), NonConcaveProduction);
}

TEST_CASE("zero capacity plant is inert") {
  ThermalStep s = testing::step_e();
  s.plant.capacity = 0.0;
  s.plant.maintenance = PiecewiseConcave({{0.0, -3.0}});
  CHECK(plant_violations(s.plant).empty());
  CHECK(idle_relative_gain(s, 7.0) == Vec2{0.0, 0.0});
  CHECK(check_assumptions(s, 200).passed());
}

TEST_CASE("random plant data is well formed and passes") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const tree::ScenarioTree t = testing::random_tree(rng);
    for (std::size_t n = 0; n < t.size(); ++n) {
      if (!t.node(n).plant) continue;
      CHECK(plant_violations(*t.node(n).plant).empty());
      CHECK(check_assumptions(t.thermal_step(n), 200).passed());
    }
  }
}
