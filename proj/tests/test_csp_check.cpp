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

#include <random>

#include "superhedge/cones.hpp"
#include "superhedge/csp_check.hpp"
#include "superhedge/production.hpp"
#include "test_support.hpp"

using namespace superhedge;
using namespace superhedge::csp;

TEST_CASE("node inequality for plant E") {
  const NodeVerdict low = check_node_arbitrage(testing::step_e(8.0), 2.0);
  CHECK(low.status == Status::kBounded);
  CHECK(low.sup_injection == 0.0);
  CHECK(low.tail_lhs == doctest::Approx(40.0));
  CHECK(low.tail_rhs == doctest::Approx(44.0));

  const NodeVerdict high = check_node_arbitrage(testing::step_e(50.0), 2.0);
  CHECK(high.status == Status::kUnbounded);
  CHECK(high.tail_lhs == doctest::Approx(250.0));
  CHECK(high.tail_rhs == doctest::Approx(44.0));
}

TEST_CASE("zero capacity is flagged unbounded") {
  production::ThermalStep s = testing::step_e();
  s.plant.capacity = 0.0;
  s.plant.maintenance = production::PiecewiseConcave({{0.0, -3.0}});
  CHECK(check_node_arbitrage(s, 2.0).status == Status::kUnbounded);
}

TEST_CASE("bounded verdicts sit at zero injection") {
  // With concave maintenance the gap is convex up to capacity and starts at
  // 0, so it is either nonnegative all the way to the tail or only at 0.
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> spot(0.0, 60.0), pi(1.1, 6.0);
  int bounded = 0;
  for (int i = 0; i < 300; ++i) {
    const NodeVerdict v = check_node_arbitrage(testing::step_e(spot(rng)), pi(rng));
    if (v.status != Status::kBounded) continue;
    ++bounded;
    CHECK(v.sup_injection == 0.0);
    CHECK(v.tail_lhs < v.tail_rhs);
  }
  CHECK(bounded > 0);
}

TEST_CASE("breakpoint refinement keeps the node verdict") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> spot(0.0, 60.0), pi(1.1, 6.0), where(0.05, 0.95);
  for (int i = 0; i < 200; ++i) {
    const production::ThermalStep s = testing::step_e(spot(rng));
    production::ThermalStep fine = s;
    std::vector<production::Breakpoint> pts = s.plant.maintenance.breakpoints();
    const double z = 5.0 + 5.0 * where(rng);
    pts.insert(pts.begin() + 2, {z, s.plant.maintenance(z)});
    fine.plant.maintenance = production::PiecewiseConcave(pts);
    const double p = pi(rng);
    const NodeVerdict a = check_node_arbitrage(s, p), b = check_node_arbitrage(fine, p);
    CHECK(a.status == b.status);
    if (a.status == Status::kBounded) CHECK(std::abs(a.sup_injection - b.sup_injection) <= 1e-6);
  }
}

TEST_CASE("missing plant data") {
  const tree::ScenarioTree t = testing::desk1();
  CHECK_THROWS_AS(check_node_arbitrage(t, 1), MissingPlantData);
  CHECK(check_node_arbitrage(testing::desk2(), 1).status == Status::kBounded);
}

TEST_CASE("high spot: the tree LP is unbounded where the node check is") {
  const tree::ScenarioTree t = testing::desk2(50.0);
  const CspVerdict v = check_csp(t);
  CHECK(v.status == Status::kUnbounded);
  REQUIRE_FALSE(v.witness.empty());
  for (const auto& [id, growth] : v.witness) {
    CHECK(growth > 0.0);
    // Each witness parent has a child whose node check is unbounded.
    bool found = false;
    for (std::size_t c : t.children(t.index_of(id))) {
      found = found || check_node_arbitrage(t, c).status == Status::kUnbounded;
    }
    CHECK(found);
  }
}

TEST_CASE("low spot: dominating the idle outcome does not bound injections") {
  // The node inequality only admits b = 0, yet burning fuel never leaves
  // the plant worse off than idling: beyond capacity the idle-relative gain
  // is a constant solvent vector, so every injection dominates.
  const tree::ScenarioTree t = testing::desk2(8.0);
  for (std::size_t c = 1; c < t.size(); ++c) {
    CHECK(check_node_arbitrage(t, c).status == Status::kBounded);
    const production::ThermalStep s = t.thermal_step(c);
    const cones::ConeRepr k = cones::make_solvency_cone(t.node(c).pi12, t.node(c).pi21);
    for (double b : {1.0, 10.0, 1e3, 1e6}) CHECK(cones::contains(k, production::idle_relative_gain(s, b)));
  }
  const CspVerdict v = check_csp(t);
  CHECK(v.status == Status::kUnbounded);
  CHECK_FALSE(v.witness.empty());
}

TEST_CASE("no production steps: bounded at zero") {
  const tree::ScenarioTree t = testing::with_production(testing::desk2(50.0), false);
  const CspVerdict v = check_csp(t);
  CHECK(v.status == Status::kBounded);
  CHECK(v.bound == 0.0);
  CHECK(v.nodes.empty());
}

TEST_CASE("later start dates") {
  const tree::ScenarioTree t = testing::desk2(50.0);
  const CspVerdict v = check_csp_tree(t, 1);
  CHECK(v.status == Status::kUnbounded);
  for (const auto& [id, growth] : v.witness) CHECK(t.node(t.index_of(id)).time_index >= 1);
}

TEST_CASE("verdict ignores probabilities; node check implies tree verdict") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 15; ++i) {
    const tree::ScenarioTree t = testing::random_tree(rng);
    const CspVerdict v = check_csp(t);
    const CspVerdict re = check_csp(t.with_cond_probs(testing::random_cond_probs(t, rng)));
    CHECK(v.status == re.status);
    for (const NodeDetail& d : v.nodes) {
      if (d.verdict.status == Status::kUnbounded) CHECK(v.status == Status::kUnbounded);
    }
  }
}
