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

#include "superhedge/dual_price.hpp"
#include "superhedge/lp.hpp"
#include "superhedge/primal_hedge.hpp"
#include "test_support.hpp"

using namespace superhedge;
using namespace superhedge::dual;

namespace {

tree::ScenarioTree one_step(double pi12, double pi21, double spot) {
  std::vector<tree::Node> nodes;
  nodes.push_back({"r", 0, std::nullopt, 1.0, pi12, pi21, std::nullopt, std::nullopt});
  nodes.push_back({"a", 1, "r", 1.0, pi12, pi21, spot, testing::plant_e()});
  return tree::ScenarioTree({0.0, 1.0}, std::move(nodes), {true});
}

PriceSystem constant(const tree::ScenarioTree& t, Vec2 z) {
  return PriceSystem{std::vector<Vec2>(t.size(), z)};
}

double primal(const tree::ScenarioTree& t, const tree::ContingentClaim& c, bool production) {
  return hedge::superreplication_price(t, c, production).price;
}

DualOptions margins(double eps, double pos = 1e-8, bool production = true) {
  DualOptions o;
  o.production_enabled = production;
  o.ratio_margin = eps;
  o.positivity_margin = pos;
  return o;
}

// Random feasible price systems: optimal vertices of the dual LP for random
// claims, mixed convexly.
std::vector<PriceSystem> sample_price_systems(const tree::ScenarioTree& t, std::mt19937_64& rng,
                                              int count) {
  std::vector<PriceSystem> vertices;
  for (int k = 0; k < 4; ++k) {
    vertices.push_back(dual_price(t, testing::random_claim(t, rng), margins(1e-6)).price_system);
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PriceSystem> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> w(vertices.size());
    double total = 0.0;
    for (double& x : w) total += (x = u(rng) + 1e-3);
    PriceSystem z{std::vector<Vec2>(t.size())};
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      for (std::size_t n = 0; n < t.size(); ++n) z.z[n] = z.z[n] + (w[k] / total) * vertices[k].z[n];
    }
    z.z[t.root()].cash = 1.0;  // exact normalization after mixing
    out.push_back(std::move(z));
  }
  return out;
}

double expected_payoff(const tree::ScenarioTree& t, const tree::ContingentClaim& c,
                       const PriceSystem& z) {
  double v = 0.0;
  for (std::size_t leaf : t.leaves()) v += tree::node_probability(t, leaf) * dot(z.z[leaf], c.payoffs[leaf]);
  return v;
}

}  // namespace

TEST_CASE("support function of plant E") {
  const tree::ScenarioTree t = one_step(2.0, 2.0, 8.0);
  const SupportValue s = alpha_support(t, constant(t, {1.0, 0.6}), true);
  CHECK(s.alpha == doctest::Approx(27.8));
  CHECK(s.alpha_idle == doctest::Approx(-65.0));
  REQUIRE(s.regimes[t.root()].has_value());
  CHECK(*s.regimes[t.root()] == doctest::Approx(10.0));
  CHECK(s.excess() == doctest::Approx(92.8));
  CHECK(s.alpha >= s.alpha_idle);
}

TEST_CASE("a plant with nothing to gain idles") {
  // Fixed costs never move the optimal regime; only flat slopes do. Zero
  // spot and a maintenance curve of slope exactly 1 make every regime tie.
  std::vector<tree::Node> nodes = one_step(2.0, 2.0, 0.0).nodes();
  nodes[1].plant->fixed_cost = 1e6;
  nodes[1].plant->maintenance = production::PiecewiseConcave({{0.0, -20.0}, {10.0, -10.0}});
  const tree::ScenarioTree t({0.0, 1.0}, nodes, {true});
  const SupportValue s = alpha_support(t, constant(t, {1.0, 0.6}), true);
  CHECK(*s.regimes[t.root()] == 0.0);
  CHECK(s.alpha == doctest::Approx(-1e6 + 0.6 * -20.0));
  CHECK(s.excess() == doctest::Approx(0.0));
}

TEST_CASE("no production, no support") {
  const tree::ScenarioTree t = one_step(2.0, 2.0, 8.0);
  const SupportValue s = alpha_support(t, constant(t, {1.0, 0.6}), false);
  CHECK(s.alpha == 0.0);
  CHECK(s.alpha_idle == 0.0);
}

TEST_CASE("invalid price systems") {
  const tree::ScenarioTree t = one_step(2.0, 2.0, 8.0);
  CHECK_THROWS_AS(alpha_support(t, constant(t, {1.0, 3.0}), true), InvalidPriceSystem);
  CHECK_THROWS_AS(alpha_support(t, constant(t, {1.0, 0.0}), true), InvalidPriceSystem);
  CHECK_THROWS_AS(alpha_support(t, constant(t, {2.0, 1.2}), true), InvalidPriceSystem);
  CHECK_THROWS_AS(alpha_support(t, PriceSystem{{Vec2{1.0, 0.6}}}, true), InvalidPriceSystem);
  const tree::ScenarioTree d = testing::desk2();
  PriceSystem z = constant(d, {1.0, 1.5});
  z.z[1] = {1.2, 1.5};  // breaks the martingale at the root
  CHECK(price_system_violation(d, z).has_value());
  CHECK_FALSE(price_system_violation(d, constant(d, {1.0, 1.5})).has_value());
}

TEST_CASE("desk-1 dual value") {
  const tree::ScenarioTree t = testing::desk1();
  const tree::ContingentClaim c = testing::uniform_claim(t, {0.0, 1.0});
  const DualResult r = dual_price(t, c, margins(1e-6, 1e-8, false));
  // The fuel price Z2/Z1 is capped at pi12 - eps = 2 - eps.
  CHECK(r.value <= 2.0);
  CHECK(r.value == doctest::Approx(2.0 - 1e-6).epsilon(1e-9));
  CHECK_FALSE(price_system_violation(t, r.price_system).has_value());
  CHECK(dual_price(t, c, margins(0.0, 0.0, false)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dual_price(t, testing::uniform_claim(t, {0.0, 0.0}), margins(1e-6, 1e-8, false)).value ==
        doctest::Approx(0.0));
}

TEST_CASE("desk-2 primal and dual agree as the margin vanishes") {
  for (double spot : {8.0, 50.0}) {
    const tree::ScenarioTree t = testing::desk2(spot);
    for (Vec2 pay : {Vec2{0.0, 1.0}, Vec2{0.0, 0.0}, Vec2{3.0, -1.0}}) {
      const tree::ContingentClaim c = testing::uniform_claim(t, pay);
      const double p = primal(t, c, true);
      const double d0 = dual_price(t, c, margins(0.0, 0.0)).value;
      CHECK(std::abs(p - d0) <= 1e-9 * (1.0 + std::abs(p)));
      const double d = dual_price(t, c, margins(1e-9)).value;
      CHECK(std::abs(p - d) <= 1e-6 * (1.0 + std::abs(p)));
      CHECK(d <= p + 1e-9 * (1.0 + std::abs(p)));
    }
  }
}

TEST_CASE("frictions too tight for the margin") {
  std::vector<tree::Node> nodes = testing::desk1().nodes();
  for (tree::Node& n : nodes) {
    n.pi12 = 1.0;
    n.pi21 = 1.0 + 1e-7;
  }
  const tree::ScenarioTree t({0.0, 1.0}, nodes);
  REQUIRE(tree::validate(t).ok());
  CHECK_THROWS_AS(dual_price(t, testing::uniform_claim(t, {0.0, 1.0}), margins(1e-6, 1e-8, false)),
                  LPInfeasible);
}

TEST_CASE("random suite: duality, weak duality and convexity of alpha") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    CAPTURE(i);
    const tree::ScenarioTree t = testing::random_tree(rng);
    const tree::ContingentClaim c = testing::random_claim(t, rng);
    const double p = primal(t, c, true);
    CHECK(std::abs(p - dual_price(t, c, margins(0.0, 0.0)).value) <= 1e-8 * (1.0 + std::abs(p)));
    CHECK(std::abs(p - dual_price(t, c, margins(1e-9)).value) <= 1e-6 * (1.0 + std::abs(p)));
    const DualResult def = dual_price(t, c);
    CHECK(def.value <= p + 1e-9 * (1.0 + std::abs(p)));
    CHECK(std::abs(p - def.value) <= 1e-4 * (1.0 + std::abs(p)));

    const SupportValue at_opt = alpha_support(t, def.price_system, true);
    CHECK(at_opt.excess() == doctest::Approx(def.support_excess).epsilon(1e-6));
    CHECK(def.value == doctest::Approx(expected_payoff(t, c, def.price_system) - at_opt.excess())
                           .epsilon(1e-6));

    const std::vector<PriceSystem> zs = sample_price_systems(t, rng, 6);
    for (const PriceSystem& z : zs) {
      REQUIRE_FALSE(price_system_violation(t, z).has_value());
      const double lower = expected_payoff(t, c, z) - alpha_support(t, z, true).excess();
      CHECK(lower <= p + 1e-7);
    }
    for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
      const double lambda = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      PriceSystem mix{std::vector<Vec2>(t.size())};
      for (std::size_t n = 0; n < t.size(); ++n) {
        mix.z[n] = lambda * zs[k].z[n] + (1.0 - lambda) * zs[k + 1].z[n];
      }
      mix.z[t.root()].cash = 1.0;
      const double a = alpha_support(t, zs[k], true).alpha;
      const double b = alpha_support(t, zs[k + 1], true).alpha;
      CHECK(alpha_support(t, mix, true).alpha <= lambda * a + (1.0 - lambda) * b + 1e-9);
    }
  }
}

TEST_CASE("dual value rises as the margin shrinks") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10; ++i) {
    const tree::ScenarioTree t = testing::random_tree(rng);
    const tree::ContingentClaim c = testing::random_claim(t, rng);
    double last = -INFINITY;
    for (double eps : {1e-4, 1e-5, 1e-6, 1e-9}) {
      const double v = dual_price(t, c, margins(eps)).value;
      CHECK(v >= last - 1e-9 * (1.0 + std::abs(v)));
      last = v;
    }
  }
}

TEST_CASE("power futures") {
  SUBCASE("deterministic spot without production") {
    std::vector<tree::Node> nodes;
    nodes.push_back({"r", 0, std::nullopt, 1.0, 2.0, 1.0, std::nullopt, std::nullopt});
    nodes.push_back({"a", 1, "r", 1.0, 2.0, 1.0, 30.0, std::nullopt});
    nodes.push_back({"b", 2, "a", 1.0, 2.0, 1.0, 45.0, std::nullopt});
    const tree::ScenarioTree t({0.0, 1.0, 2.0}, nodes);
    for (double x : {0.0, 0.5, 2.0}) {
      CHECK(power_futures_price(t, x, margins(1e-6, 1e-8, false)).value ==
            doctest::Approx(75.0 * x));
    }
  }
  SUBCASE("missing spot") {
    CHECK_THROWS_AS(power_futures_claim(testing::desk1(), 1.0), MissingSpot);
    CHECK_THROWS_AS(power_futures_claim(testing::desk2(), -1.0), std::invalid_argument);
  }
  SUBCASE("F(0) is minus the production profit") {
    const tree::ScenarioTree t = testing::desk2(50.0);
    const double f0 = power_futures_price(t, 0.0, margins(0.0, 0.0)).value;
    CHECK(f0 == doctest::Approx(primal(t, testing::uniform_claim(t, {0.0, 0.0}), true)));
    CHECK(f0 < 0.0);
  }
  SUBCASE("desk-2 matches the primal price of the same cash claim") {
    const tree::ScenarioTree t = testing::desk2(8.0);
    const double p = primal(t, power_futures_claim(t, 1.0), true);
    CHECK(power_futures_price(t, 1.0, margins(0.0, 0.0)).value ==
          doctest::Approx(p).epsilon(1e-9));
  }
  SUBCASE("convex and nondecreasing in x") {
    std::mt19937_64 rng(43);
    const std::vector<double> xs{0.0, 0.5, 1.0, 2.0, 4.0};
    for (int i = 0; i < 10; ++i) {
      const tree::ScenarioTree t = testing::random_tree(rng);
      std::vector<double> f;
      for (double x : xs) f.push_back(power_futures_price(t, x).value);
      for (std::size_t k = 0; k + 1 < xs.size(); ++k) CHECK(f[k + 1] >= f[k] - 1e-7);
      for (std::size_t k = 1; k + 1 < xs.size(); ++k) {
        const double w = (xs[k] - xs[k - 1]) / (xs[k + 1] - xs[k - 1]);
        CHECK(f[k] <= (1.0 - w) * f[k - 1] + w * f[k + 1] + 1e-7 * (1.0 + std::abs(f[k])));
      }
    }
  }
}
