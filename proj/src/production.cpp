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

#include "superhedge/production.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace superhedge::production {

namespace {

constexpr double kSlopeTol = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

PiecewiseConcave::PiecewiseConcave(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {}

double PiecewiseConcave::operator()(double z) const {
  if (points_.empty()) throw std::domain_error("empty piecewise function");
  if (z < points_.front().z || z > points_.back().z || std::isnan(z)) {
    throw std::domain_error("argument " + fmt(z) + " outside [" + fmt(points_.front().z) +
                            ", " + fmt(points_.back().z) + "]");
  }
  auto it = std::upper_bound(points_.begin(), points_.end(), z,
                             [](double v, const Breakpoint& b) { return v < b.z; });
  if (it == points_.end()) return points_.back().value;
  if (it == points_.begin()) return points_.front().value;
  const Breakpoint& hi = *it;
  const Breakpoint& lo = *(it - 1);
  const double t = (z - lo.z) / (hi.z - lo.z);
  return lo.value + t * (hi.value - lo.value);
}

std::vector<double> PiecewiseConcave::slopes() const {
  std::vector<double> s;
  for (std::size_t j = 1; j < points_.size(); ++j) {
    s.push_back((points_[j].value - points_[j - 1].value) / (points_[j].z - points_[j - 1].z));
  }
  return s;
}

std::vector<std::string> PiecewiseConcave::violations() const {
  std::vector<std::string> out;
  if (points_.empty()) {
    out.push_back("maintenance has no breakpoints");
    return out;
  }
  if (points_.front().z != 0.0) out.push_back("maintenance must start at z = 0");
  for (const auto& p : points_) {
    if (!std::isfinite(p.z) || !std::isfinite(p.value)) {
      out.push_back("non-finite maintenance breakpoint");
      return out;
    }
    if (p.value > 0.0) {
      out.push_back("maintenance value " + fmt(p.value) + " at z = " + fmt(p.z) +
                    " is positive");
    }
  }
  for (std::size_t j = 1; j < points_.size(); ++j) {
    if (!(points_[j].z > points_[j - 1].z)) {
      out.push_back("maintenance breakpoints not strictly increasing at z = " +
                    fmt(points_[j].z));
      return out;
    }
  }
  const std::vector<double> s = slopes();
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!(s[j] > 0.0)) out.push_back("maintenance slope " + fmt(s[j]) + " is not positive");
    if (j > 0 && s[j] > s[j - 1] + kSlopeTol) {
      out.push_back("maintenance not concave: slope increases from " + fmt(s[j - 1]) +
                    " to " + fmt(s[j]) + " at z = " + fmt(points_[j].z));
    }
  }
  if (!s.empty() && s.back() < 1.0) {
    out.push_back("maintenance left derivative at capacity is " + fmt(s.back()) + " < 1");
  }
  return out;
}

std::vector<std::string> plant_violations(const PlantStepData& plant) {
  std::vector<std::string> out;
  if (!(plant.heat_rate >= 0.0) || !std::isfinite(plant.heat_rate)) {
    out.push_back("heat rate " + fmt(plant.heat_rate) + " is negative");
  }
  const bool capacity_ok = plant.capacity >= 0.0 && std::isfinite(plant.capacity);
  if (!capacity_ok) out.push_back("capacity " + fmt(plant.capacity) + " is negative");
  if (!std::isfinite(plant.fixed_cost)) out.push_back("fixed cost is not finite");
  for (auto& v : plant.maintenance.violations()) out.push_back(std::move(v));
  if (capacity_ok && !plant.maintenance.breakpoints().empty() &&
      plant.maintenance.domain_end() != plant.capacity) {
    out.push_back("maintenance defined up to " + fmt(plant.maintenance.domain_end()) +
                  " but capacity is " + fmt(plant.capacity));
  }
  return out;
}

Vec2 thermal_output(const ThermalStep& step, double beta2) {
  if (!(beta2 >= 0.0)) throw NegativeRegime("fuel injection " + fmt(beta2) + " is negative");
  const PlantStepData& p = step.plant;
  const double used = std::min(beta2, p.capacity);
  return {step.spot_power * p.heat_rate * used - p.fixed_cost,
          p.maintenance(used) + std::max(beta2 - p.capacity, 0.0)};
}

Vec2 idle_relative_gain(const ThermalStep& step, double beta2) {
  return thermal_output(step, beta2) - Vec2{0.0, beta2} - thermal_output(step, 0.0);
}

Vec2 production_bound(const ThermalStep& step) {
  const PlantStepData& p = step.plant;
  const double c0 = p.maintenance(0.0);
  const double cd = p.maintenance(p.capacity);
  return {std::abs(step.spot_power * p.heat_rate * p.capacity) + std::abs(p.fixed_cost),
          std::max(std::abs(c0), std::abs(cd - p.capacity))};
}

std::vector<double> regime_breakpoints(const ThermalStep& step) {
  std::vector<double> out{0.0};
  for (const auto& b : step.plant.maintenance.breakpoints()) out.push_back(b.z);
  out.push_back(step.plant.capacity);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool thermal_concave_symbolic(const ThermalStep& step) {
  const PlantStepData& p = step.plant;
  if (p.capacity == 0.0) return true;  // both legs affine
  // Cash leg slopes: P q on [0, D], then 0.
  if (step.spot_power * p.heat_rate < 0.0) return false;
  // Fuel leg slopes: c' on [0, D], then 1.
  const std::vector<double> s = p.maintenance.slopes();
  for (std::size_t j = 1; j < s.size(); ++j) {
    if (s[j] > s[j - 1] + kSlopeTol) return false;
  }
  return s.empty() || s.back() >= 1.0 - kSlopeTol;
}

GainPieces idle_relative_gain_pieces(const ThermalStep& step) {
  if (!thermal_concave_symbolic(step)) {
    throw NonConcaveProduction("production function is not concave (spot " +
                               fmt(step.spot_power) + ", heat rate " +
                               fmt(step.plant.heat_rate) + ")");
  }
  const PlantStepData& p = step.plant;
  GainPieces g;
  const double pq = step.spot_power * p.heat_rate;
  if (p.capacity == 0.0) {
    g.cash.push_back({0.0, 0.0});
    g.fuel.push_back({0.0, 0.0});
    return g;
  }
  g.cash.push_back({pq, 0.0});
  g.cash.push_back({0.0, pq * p.capacity});
  const auto& pts = p.maintenance.breakpoints();
  const double c0 = pts.front().value;
  const std::vector<double> s = p.maintenance.slopes();
  for (std::size_t j = 0; j < s.size(); ++j) {
    g.fuel.push_back({s[j] - 1.0, pts[j].value - s[j] * pts[j].z - c0});
  }
  g.fuel.push_back({0.0, pts.back().value - p.capacity - c0});
  return g;
}

AssumptionReport check_assumptions(const ProductionFunction& r, const Vec2& bound,
                                   std::span<const double> kinks,
                                   const SamplingOptions& options) {
  AssumptionReport report;
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> beta(0.0, options.beta_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = options.tolerance;

  auto record = [](Verdict& v, bool ok, const Witness& w) {
    ++v.checks;
    if (ok) return;
    ++v.violations;
    if (v.passed) v.witness = w;
    v.passed = false;
  };

  for (std::size_t i = 0; i < options.samples; ++i) {
    const double a = beta(rng);
    const double b = beta(rng);
    const double lambda = unit(rng);
    const Vec2 defect = r(lambda * a + (1.0 - lambda) * b) - lambda * r(a) - (1.0 - lambda) * r(b);
    record(report.concavity, defect.cash >= -tol && defect.fuel >= -tol,
           {a, b, lambda, defect});
  }

  std::vector<double> levels;
  levels.reserve(options.samples + 4);
  for (std::size_t i = 0; i < options.samples; ++i) levels.push_back(beta(rng));
  for (double far : {10.0 * options.beta_max, 1e3 * options.beta_max + 1.0, 1e6}) {
    levels.push_back(far);
  }
  for (double level : levels) {
    const Vec2 excess = abs(r(level) - Vec2{0.0, level}) - bound;
    record(report.boundedness, excess.cash <= tol && excess.fuel <= tol,
           {level, level, 1.0, excess});
  }

  for (double k : kinks) {
    const double h = 1e-12 * std::max(1.0, std::abs(k));
    const Vec2 at = r(k);
    const Vec2 right = r(k + h) - at;
    record(report.continuity, std::abs(right.cash) <= tol && std::abs(right.fuel) <= tol,
           {k, k + h, 1.0, right});
    if (k - h >= 0.0) {
      const Vec2 left = r(k - h) - at;
      record(report.continuity, std::abs(left.cash) <= tol && std::abs(left.fuel) <= tol,
             {k, k - h, 1.0, left});
    }
  }
  return report;
}

AssumptionReport check_assumptions(const ThermalStep& step, std::size_t samples,
                                   std::uint64_t seed) {
  SamplingOptions options;
  options.samples = samples;
  options.seed = seed;
  options.beta_max = std::max(1.0, 4.0 * step.plant.capacity);
  const std::vector<double> kinks = regime_breakpoints(step);
  AssumptionReport report = check_assumptions(
      [&step](double b) { return thermal_output(step, b); }, production_bound(step), kinks,
      options);
  report.symbolic = thermal_concave_symbolic(step);
  return report;
}

}  // namespace superhedge::production
