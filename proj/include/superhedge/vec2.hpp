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

#include <cmath>

namespace superhedge {

// A two-asset position or price vector: component 1 is cash, 2 is fuel.
struct Vec2 {
  double cash = 0.0;
  double fuel = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) {
    cash += o.cash;
    fuel += o.fuel;
    return *this;
  }
  constexpr Vec2& operator-=(const Vec2& o) {
    cash -= o.cash;
    fuel -= o.fuel;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.cash, -a.fuel}; }
  friend constexpr Vec2 operator*(double s, const Vec2& a) { return {s * a.cash, s * a.fuel}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.cash * b.cash + a.fuel * b.fuel; }

inline Vec2 abs(const Vec2& v) { return {std::abs(v.cash), std::abs(v.fuel)}; }

}  // namespace superhedge
