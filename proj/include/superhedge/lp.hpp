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
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace superhedge::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute tolerance on primal constraint residuals of an optimal point.
inline constexpr double kFeasTol = 1e-9;
// Relative duality-gap tolerance: |primal - dual| <= kGapTol * (1 + |value|).
inline constexpr double kGapTol = 1e-7;
// Smallest pivot element accepted by the ratio test.
inline constexpr double kPivotTol = 1e-10;

enum class Sense { kMinimize, kMaximize };
enum class Relation { kLessEqual, kEqual, kGreaterEqual };
enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* to_string(Status status);
const char* to_string(Relation relation);

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::kEqual;
  double rhs = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = kInfinity;

  static Bounds free() { return {-kInfinity, kInfinity}; }
  static Bounds fixed(double v) { return {v, v}; }
};

// A dense linear program over n variables.
//
// Variables default to the nonnegative orthant; use Bounds::free() or finite
// upper bounds where needed. Rows are stored densely; the problems built in
// this project have at most a few hundred columns.
class LPProblem {
 public:
  explicit LPProblem(std::size_t num_variables, Sense sense = Sense::kMinimize);

  std::size_t num_variables() const { return objective_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }

  Sense sense() const { return sense_; }
  void set_sense(Sense sense) { sense_ = sense; }

  const std::vector<double>& objective() const { return objective_; }
  void set_objective(std::size_t j, double c) { objective_.at(j) = c; }
  void set_objective(std::vector<double> c) { objective_ = std::move(c); }

  const Bounds& bounds(std::size_t j) const { return bounds_.at(j); }
  void set_bounds(std::size_t j, Bounds b) { bounds_.at(j) = b; }

  // Appends a variable and returns its index. Existing rows are widened.
  std::size_t add_variable(double objective = 0.0, Bounds bounds = {});

  // Appends a row. `coefficients` may be shorter than num_variables(); missing
  // entries are zero. Returns the row index.
  std::size_t add_constraint(std::vector<double> coefficients, Relation relation,
                             double rhs);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  Constraint& constraint(std::size_t i) { return constraints_.at(i); }

  // Throws MalformedProblem describing the first violated invariant.
  void check_well_formed() const;

  // Plain-text layout: one objective line, one line per constraint, one line
  // per non-default bound. Debug aid only; no parser is provided.
  void dump(std::ostream& os) const;

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<Bounds> bounds_;
  std::vector<Constraint> constraints_;
};

struct LPSolution {
  Status status = Status::kInfeasible;
  // Objective value in the problem's own sense (present iff optimal).
  std::optional<double> value;
  // Objective of the dual solution recovered from the final basis.
  std::optional<double> dual_value;
  std::vector<double> primal;
  // One multiplier per constraint, in the sign convention of the problem's
  // sense: for a minimization, <= rows carry y <= 0 and >= rows y >= 0 (value
  // = y . b + bound terms); for a maximization the signs flip.
  std::vector<double> duals;
  // Unbounded: a direction d with A d (rel) 0 for every row, d within the
  // recession cone of the bounds, and objective . d improving.
  std::vector<double> ray;
  // Infeasible: row multipliers f with f_i signed by the row relation
  // (<= : f <= 0, >= : f >= 0) such that no point inside the variable bounds
  // satisfies sum_i f_i (a_i . x) = sum_i f_i b_i.
  std::vector<double> farkas;
  std::size_t iterations = 0;

  bool optimal() const { return status == Status::kOptimal; }
};

class MalformedProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two-phase dense revised simplex with Bland's rule.
LPSolution solve_lp(const LPProblem& problem);

// Largest absolute violation of rows and bounds at `x`.
double max_residual(const LPProblem& problem, const std::vector<double>& x);

}  // namespace superhedge::lp
