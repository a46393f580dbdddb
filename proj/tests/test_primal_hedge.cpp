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

#include "superhedge/market_tree.hpp"
#include "superhedge/primal_hedge.hpp"
#include "test_support.hpp"

using namespace superhedge;
using namespace superhedge::hedge;

namespace {

double price(const tree::ScenarioTree& t, const tree::ContingentClaim& c, bool production) {
  return superreplication_price(t, c, production).price;
}

tree::ContingentClaim scaled(const tree::ScenarioTree& t, const tree::ContingentClaim& c,
                             double s) {
  std::vector<Vec2> pay = c.payoffs;
  for (Vec2& v : pay) v = s * v;
  return tree::make_claim(t, std::move(pay));
}

}  // namespace

TEST_CASE("desk-1: one unit of fuel costs 2") {
  const tree::ScenarioTree t = testing::desk1();
  const tree::ContingentClaim c = testing::uniform_claim(t, {0.0, 1.0});
  const PriceResult r = superreplication_price(t, c, false);
  CHECK(r.price == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.replay_margin >= -1e-7);
  // Buy at the root: weight 1 on the buy-fuel generator.
  CHECK(r.strategy.trades[t.root()].cash == doctest::Approx(-2.0));
  CHECK(r.strategy.trades[t.root()].fuel == doctest::Approx(1.0));
  CHECK(r.lp_stats.status == lp::Status::kOptimal);

  const double brute = brute_force_price(t, c, 0.01, false);
  CHECK(std::abs(brute - 2.0) <= 0.02);
  CHECK(brute >= r.price - 1e-9);
}

TEST_CASE("trivial claims") {
  const tree::ScenarioTree t = testing::desk1();
  CHECK(price(t, testing::uniform_claim(t, {0.0, 0.0}), false) == doctest::Approx(0.0));
  CHECK(price(t, testing::uniform_claim(t, {-1.0, 0.0}), false) == doctest::Approx(-1.0));
  CHECK(brute_force_price(t, testing::uniform_claim(t, {0.0, 0.0}), 0.01, false) ==
        doctest::Approx(0.0));
}

TEST_CASE("desk-2: the idle claim is priced at minus the production profit") {
  for (double spot : {8.0, 50.0}) {
    const tree::ScenarioTree t = testing::desk2(spot);
    const tree::ContingentClaim zero = testing::uniform_claim(t, {0.0, 0.0});
    const PriceResult r = superreplication_price(t, zero, true);
    CHECK(r.price <= 1e-9);
    CHECK(r.replay_margin >= -1e-7);
    const double brute = brute_force_price(t, zero, 0.5, true);
    CHECK(brute >= r.price - 1e-7);
    CHECK(brute == doctest::Approx(r.price).epsilon(1e-6));
  }
}

TEST_CASE("production without plant data is a schema error") {
  const tree::ScenarioTree t = testing::desk1();
  CHECK_THROWS_AS(superreplication_price(t, testing::uniform_claim(t, {0.0, 1.0}), true),
                  tree::SchemaError);
}

TEST_CASE("negative spot cannot be encoded") {
  const tree::ScenarioTree t = testing::desk2(-3.0);
  CHECK_THROWS_AS(price(t, testing::uniform_claim(t, {0.0, 1.0}), true),
                  production::NonConcaveProduction);
  CHECK_NOTHROW(price(t, testing::uniform_claim(t, {0.0, 1.0}), false));
}

TEST_CASE("brute force refuses large trees") {
  std::mt19937_64 rng(20);
  testing::RandomShape shape;
  shape.max_branches = 5;
  for (int i = 0; i < 20; ++i) {
    const tree::ScenarioTree t = testing::random_tree(rng, shape);
    bool wide = false;
    for (std::size_t n = 0; n < t.size(); ++n) wide = wide || t.children(n).size() > 3;
    if (t.num_periods() <= 2 && !wide) continue;
    CHECK_THROWS_AS(brute_force_price(t, testing::uniform_claim(t, {0.0, 0.0}), 0.1, false),
                    InstanceTooLarge);
  }
}

TEST_CASE("random instances: replay, scaling and the brute-force bound") {
  std::mt19937_64 rng(21);
  testing::RandomShape shape;
  shape.max_periods = 2;
  for (int i = 0; i < 25; ++i) {
    CAPTURE(i);
    const tree::ScenarioTree t = testing::random_tree(rng, shape);
    const tree::ContingentClaim c = testing::random_claim(t, rng);
    for (bool production : {false, true}) {
      const PriceResult r = superreplication_price(t, c, production);
      CHECK(r.replay_margin >= -1e-7);
      CHECK(replay_margin(t, c, r.strategy) == doctest::Approx(r.replay_margin));
      const double p2 = price(t, scaled(t, c, 2.0), production);
      if (production) {
        // Convex in the claim: p(2H) >= 2 p(H) - p(0).
        const double p0 = price(t, scaled(t, c, 0.0), production);
        CHECK(p2 >= 2.0 * r.price - p0 - 1e-7 * (1.0 + std::abs(p2)));
      } else {
        CHECK(p2 == doctest::Approx(2.0 * r.price).epsilon(1e-9));
      }
    }
    if (t.num_periods() == 1) {
      const double lp = price(t, c, true);
      const double brute = brute_force_price(t, c, 0.25, true);
      CHECK(brute >= lp - 1e-7 * (1.0 + std::abs(lp)));
    }
  }
}

TEST_CASE("price ignores conditional probabilities") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10; ++i) {
    const tree::ScenarioTree t = testing::random_tree(rng);
    const tree::ContingentClaim c = testing::random_claim(t, rng);
    const double base = price(t, c, true);
    for (int k = 0; k < 3; ++k) {
      const tree::ScenarioTree re = t.with_cond_probs(testing::random_cond_probs(t, rng));
      REQUIRE(tree::validate(re).ok());
      CHECK(std::abs(price(re, c, true) - base) <= 1e-9);
    }
  }
}

TEST_CASE("monotone in frictions and in production") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 15; ++i) {
    CAPTURE(i);
    const tree::ScenarioTree t = testing::random_tree(rng);
    const tree::ContingentClaim c = testing::random_claim(t, rng);
    const double with = price(t, c, true);
    const double without = price(t, c, false);
    CHECK(with <= without + 1e-9 * (1.0 + std::abs(without)));

    const std::size_t node = rng() % t.size();
    const tree::Node& n = t.node(node);
    const tree::ScenarioTree wider = testing::with_quotes(t, node, n.pi12 * 1.25, n.pi21);
    CHECK(price(wider, c, true) >= with - 1e-9 * (1.0 + std::abs(with)));
  }
}
