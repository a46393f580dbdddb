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
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "superhedge/vec2.hpp"

// Production functions of a thermal plant that burns fuel to sell power at
// spot, plus sampling and symbolic validators for the regularity conditions a
// production function must satisfy (concavity, bounded net income,
// continuity).
namespace superhedge::production {

class NegativeRegime : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The LP encodings need R concave; a negative spot makes the cash leg convex.
class NonConcaveProduction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Breakpoint {
  double z = 0.0;
  double value = 0.0;
};

// Piecewise-linear maintenance cost c on [0, capacity], given by its
// breakpoints. Concavity etc. are not enforced on construction; see
// violations().
class PiecewiseConcave {
 public:
  PiecewiseConcave() = default;
  explicit PiecewiseConcave(std::vector<Breakpoint> breakpoints);

  const std::vector<Breakpoint>& breakpoints() const { return points_; }
  double domain_end() const { return points_.empty() ? 0.0 : points_.back().z; }

  // Linear interpolation; throws std::domain_error outside [0, domain_end()].
  double operator()(double z) const;

  // Slope of each segment, left to right.
  std::vector<double> slopes() const;

  // Human-readable descriptions of every violated invariant: z_0 = 0, z
  // strictly increasing, nonincreasing slopes, values <= 0, slopes > 0, last
  // slope >= 1.
  std::vector<std::string> violations() const;

 private:
  std::vector<Breakpoint> points_;
};

struct PlantStepData {
  double heat_rate = 0.0;   // MWh per fuel unit
  double capacity = 0.0;    // fuel units
  double fixed_cost = 0.0;  // cash
  PiecewiseConcave maintenance;
};

// Invariant violations of a plant step, including the maintenance curve
// covering exactly [0, capacity].
std::vector<std::string> plant_violations(const PlantStepData& plant);

// The production function delivered at one node: plant data plus the spot
// price the electricity is sold at.
struct ThermalStep {
  double spot_power = 0.0;
  PlantStepData plant;
};

// R(beta) for an injection of beta2 fuel (cash injection fixed at zero):
//   R1 = P q min(beta2, D) - gamma
//   R2 = c(min(beta2, D)) + max(beta2 - D, 0)
Vec2 thermal_output(const ThermalStep& step, double beta2);

// Net change of the position relative to not producing:
// R(beta) - beta e2 - R(0).
Vec2 idle_relative_gain(const ThermalStep& step, double beta2);

// Componentwise bound on |R(beta) - beta| valid for every beta >= 0:
// (|P q D| + |gamma|, max(|c(0)|, |c(D) - D|)).
Vec2 production_bound(const ThermalStep& step);

// Regime levels at which R has a kink: 0, every maintenance breakpoint, D.
std::vector<double> regime_breakpoints(const ThermalStep& step);

struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
};

// idle_relative_gain as a minimum of affine functions of beta2, one family
// per component. Throws NonConcaveProduction when P q < 0 or the maintenance
// curve is not concave with last slope >= 1.
struct GainPieces {
  std::vector<AffinePiece> cash;
  std::vector<AffinePiece> fuel;
};
GainPieces idle_relative_gain_pieces(const ThermalStep& step);

// A production function of the fuel injection, returning R(beta).
using ProductionFunction = std::function<Vec2(double)>;

struct Witness {
  double beta_a = 0.0;
  double beta_b = 0.0;
  double lambda = 0.0;
  Vec2 defect;
};

struct Verdict {
  bool passed = true;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::optional<Witness> witness;
};

struct AssumptionReport {
  Verdict concavity;
  Verdict boundedness;
  Verdict continuity;
  // Breakpoint-enumeration proof; only available for thermal plants.
  std::optional<bool> symbolic;

  bool passed() const {
    return concavity.passed && boundedness.passed && continuity.passed &&
           symbolic.value_or(true);
  }
};

struct SamplingOptions {
  std::size_t samples = 1000;
  // Regular samples are drawn from [0, beta_max]; the boundedness check adds
  // injections far beyond it.
  double beta_max = 1.0;
  double tolerance = 1e-9;
  std::uint64_t seed = 0x5eed;
};

AssumptionReport check_assumptions(const ProductionFunction& r, const Vec2& bound,
                                   std::span<const double> kinks,
                                   const SamplingOptions& options);

AssumptionReport check_assumptions(const ThermalStep& step, std::size_t samples,
                                   std::uint64_t seed = 0x5eed);

// Concavity of both legs decided from the slope sequences alone.
bool thermal_concave_symbolic(const ThermalStep& step);

}  // namespace superhedge::production
