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

#include "superhedge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace superhedge::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::kOptimal:
      return "Optimal";
    case Status::kInfeasible:
      return "Infeasible";
    case Status::kUnbounded:
      return "Unbounded";
  }
  return "?";
}

const char* to_string(Relation relation) {
  switch (relation) {
    case Relation::kLessEqual:
      return "<=";
    case Relation::kEqual:
      return "=";
    case Relation::kGreaterEqual:
      return ">=";
  }
  return "?";
}

LPProblem::LPProblem(std::size_t num_variables, Sense sense)
    : sense_(sense), objective_(num_variables, 0.0), bounds_(num_variables) {}

std::size_t LPProblem::add_variable(double objective, Bounds bounds) {
  objective_.push_back(objective);
  bounds_.push_back(bounds);
  for (auto& row : constraints_) row.coefficients.resize(objective_.size(), 0.0);
  return objective_.size() - 1;
}

std::size_t LPProblem::add_constraint(std::vector<double> coefficients,
                                      Relation relation, double rhs) {
  if (coefficients.size() > objective_.size()) {
    throw MalformedProblem("constraint wider than the variable count");
  }
  coefficients.resize(objective_.size(), 0.0);
  constraints_.push_back({std::move(coefficients), relation, rhs});
  return constraints_.size() - 1;
}

void LPProblem::check_well_formed() const {
  const std::size_t n = objective_.size();
  if (bounds_.size() != n) throw MalformedProblem("bounds/objective size mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(objective_[j])) {
      throw MalformedProblem("non-finite objective coefficient at column " +
                             std::to_string(j));
    }
    const Bounds& b = bounds_[j];
    if (std::isnan(b.lower) || std::isnan(b.upper) || b.lower > b.upper ||
        b.lower == kInfinity || b.upper == -kInfinity) {
      throw MalformedProblem("invalid bounds at column " + std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const Constraint& row = constraints_[i];
    if (row.coefficients.size() != n) {
      throw MalformedProblem("row " + std::to_string(i) + " has width " +
                             std::to_string(row.coefficients.size()) + ", expected " +
                             std::to_string(n));
    }
    if (!std::isfinite(row.rhs)) {
      throw MalformedProblem("non-finite rhs in row " + std::to_string(i));
    }
    for (double a : row.coefficients) {
      if (!std::isfinite(a)) {
        throw MalformedProblem("non-finite coefficient in row " + std::to_string(i));
      }
    }
  }
}

void LPProblem::dump(std::ostream& os) const {
  os << (sense_ == Sense::kMinimize ? "min" : "max");
  for (double c : objective_) os << ' ' << c;
  os << '\n';
  for (const auto& row : constraints_) {
    os << "row";
    for (double a : row.coefficients) os << ' ' << a;
    os << ' ' << to_string(row.relation) << ' ' << row.rhs << '\n';
  }
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    const Bounds& b = bounds_[j];
    if (b.lower == 0.0 && b.upper == kInfinity) continue;
    os << "bound " << j << ' ' << b.lower << ' ' << b.upper << '\n';
  }
}

double max_residual(const LPProblem& problem, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < problem.num_variables(); ++j) {
    const Bounds& b = problem.bounds(j);
    worst = std::max(worst, b.lower - x[j]);
    worst = std::max(worst, x[j] - b.upper);
  }
  for (const auto& row : problem.constraints()) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) lhs += row.coefficients[j] * x[j];
    const double r = lhs - row.rhs;
    switch (row.relation) {
      case Relation::kLessEqual:
        worst = std::max(worst, r);
        break;
      case Relation::kGreaterEqual:
        worst = std::max(worst, -r);
        break;
      case Relation::kEqual:
        worst = std::max(worst, std::abs(r));
        break;
    }
  }
  return worst;
}

namespace {

constexpr double kOptTol = 1e-9;
constexpr std::size_t kRefactorEvery = 64;
constexpr std::size_t kMaxIterations = 1'000'000;
// Harris ratio test: bound violation tolerated when widening ties.
constexpr double kHarrisTol = 1e-11;
// Consecutive degenerate pivots before falling back to strict Bland ties.
constexpr std::size_t kDegenerateRun = 50;

// How an original variable is expressed through standard-form columns:
//   x = offset + sign * x'[col] (- x'[col_neg] when split).
struct ColumnMap {
  double offset = 0.0;
  double sign = 1.0;
  int col = -1;
  int col_neg = -1;
};

// min c.x, A x = b, x >= 0, with b >= 0. Columns stored densely.
struct StandardForm {
  std::size_t rows = 0;
  std::vector<std::vector<double>> columns;
  std::vector<double> cost;
  std::vector<double> rhs;
  double objective_offset = 0.0;
  // Per original row: sign applied to make rhs >= 0. Bound rows follow.
  std::vector<double> row_flip;
  // A column with a +1 in exactly this row and zero elsewhere, or -1.
  std::vector<int> unit_column;
  std::vector<ColumnMap> map;
  std::size_t original_rows = 0;
};

StandardForm to_standard_form(const LPProblem& p) {
  StandardForm sf;
  const std::size_t n = p.num_variables();
  const double sense = p.sense() == Sense::kMinimize ? 1.0 : -1.0;
  sf.map.resize(n);

  std::vector<std::pair<int, double>> upper_rows;  // (column, capacity)
  auto new_column = [&](double c) {
    sf.columns.emplace_back();
    sf.cost.push_back(c);
    return static_cast<int>(sf.columns.size() - 1);
  };
  for (std::size_t j = 0; j < n; ++j) {
    const Bounds& b = p.bounds(j);
    const double c = sense * p.objective()[j];
    ColumnMap& m = sf.map[j];
    if (std::isfinite(b.lower)) {
      m.offset = b.lower;
      if (b.upper == b.lower) {  // fixed: no column
        sf.objective_offset += c * m.offset;
        continue;
      }
      m.col = new_column(c);
      if (std::isfinite(b.upper)) upper_rows.emplace_back(m.col, b.upper - b.lower);
    } else if (std::isfinite(b.upper)) {
      m.offset = b.upper;
      m.sign = -1.0;
      m.col = new_column(-c);
    } else {
      m.col = new_column(c);
      m.col_neg = new_column(-c);
    }
    sf.objective_offset += c * m.offset;
  }

  const auto& cons = p.constraints();
  sf.original_rows = cons.size();
  sf.rows = cons.size() + upper_rows.size();
  sf.rhs.assign(sf.rows, 0.0);
  sf.row_flip.assign(sf.rows, 1.0);
  sf.unit_column.assign(sf.rows, -1);
  const std::size_t structural = sf.columns.size();
  for (auto& col : sf.columns) col.assign(sf.rows, 0.0);

  for (std::size_t i = 0; i < cons.size(); ++i) {
    double rhs = cons[i].rhs;
    for (std::size_t j = 0; j < n; ++j) {
      const double a = cons[i].coefficients[j];
      if (a == 0.0) continue;
      const ColumnMap& m = sf.map[j];
      rhs -= a * m.offset;
      if (m.col >= 0) sf.columns[m.col][i] = a * m.sign;
      if (m.col_neg >= 0) sf.columns[m.col_neg][i] = -a;
    }
    sf.rhs[i] = rhs;
  }
  for (std::size_t k = 0; k < upper_rows.size(); ++k) {
    const std::size_t i = cons.size() + k;
    sf.columns[upper_rows[k].first][i] = 1.0;
    sf.rhs[i] = upper_rows[k].second;
  }
  // Slacks.
  for (std::size_t i = 0; i < sf.rows; ++i) {
    Relation rel = i < cons.size() ? cons[i].relation : Relation::kLessEqual;
    if (rel == Relation::kEqual) continue;
    const int s = new_column(0.0);
    sf.columns[s].assign(sf.rows, 0.0);
    sf.columns[s][i] = rel == Relation::kLessEqual ? 1.0 : -1.0;
  }
  // Nonnegative right-hand sides.
  for (std::size_t i = 0; i < sf.rows; ++i) {
    if (sf.rhs[i] < 0.0) {
      sf.row_flip[i] = -1.0;
      sf.rhs[i] = -sf.rhs[i];
      for (auto& col : sf.columns) col[i] = -col[i];
    }
  }
  for (std::size_t c = structural; c < sf.columns.size(); ++c) {
    for (std::size_t i = 0; i < sf.rows; ++i) {
      if (sf.columns[c][i] == 1.0) sf.unit_column[i] = static_cast<int>(c);
    }
  }
  return sf;
}

class Simplex {
 public:
  explicit Simplex(StandardForm& sf) : sf_(sf), m_(sf.rows) {
    // Columns [0, n_) are structural+slack; [n_, n_ + m_) artificial.
    n_ = sf_.columns.size();
    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      basis_[i] = sf_.unit_column[i] >= 0 ? static_cast<std::size_t>(sf_.unit_column[i])
                                          : n_ + i;
    }
    refactor();
  }

  std::size_t iterations() const { return iterations_; }

  // Phase 1 objective: sum of artificials.
  double phase_one() {
    cost_.assign(n_ + m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) cost_[n_ + i] = 1.0;
    allow_artificial_entry_ = false;
    [[maybe_unused]] auto st = iterate();  // bounded below by 0
    refactor();
    return objective();
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) continue;
      // Largest available pivot; rows with none left are redundant.
      std::size_t best = n_;
      double best_abs = 1e-7;
      for (std::size_t j = 0; j < n_; ++j) {
        if (is_basic(j)) continue;
        double ur = 0.0;
        for (std::size_t k = 0; k < m_; ++k) ur += binv_[r][k] * sf_.columns[j][k];
        if (std::abs(ur) > best_abs) {
          best_abs = std::abs(ur);
          best = j;
        }
      }
      if (best < n_) {
        std::vector<double> u = ftran(best);
        pivot(r, best, u);
      }
    }
  }

  // Returns kOptimal or kUnbounded.
  Status phase_two() {
    cost_.assign(n_ + m_, 0.0);
    std::copy(sf_.cost.begin(), sf_.cost.end(), cost_.begin());
    return iterate();
  }

  double objective() const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i) v += cost_[basis_[i]] * xb_[i];
    return v;
  }

  std::vector<double> duals() const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost_[basis_[k]];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * binv_[k][i];
    }
    return y;
  }

  std::vector<double> point() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) x[basis_[i]] = std::max(0.0, xb_[i]);
    }
    return x;
  }

  const std::vector<double>& ray() const { return ray_; }

  void refactor() {
    // Gauss-Jordan inversion of the basis matrix with partial pivoting.
    std::vector<std::vector<double>> a(m_, std::vector<double>(2 * m_, 0.0));
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) a[i][k] = column(basis_[k], i);
      a[k][m_ + k] = 1.0;
    }
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t best = c;
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
      }
      std::swap(a[c], a[best]);
      const double piv = a[c][c];
      if (std::abs(piv) < 1e-14) continue;  // singular; keep previous scale
      for (auto& v : a[c]) v /= piv;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c || a[r][c] == 0.0) continue;
        const double f = a[r][c];
        for (std::size_t k = c; k < 2 * m_; ++k) a[r][k] -= f * a[c][k];
      }
    }
    binv_.assign(m_, std::vector<double>(m_, 0.0));
    for (std::size_t i = 0; i < m_; ++i) {
      std::copy(a[i].begin() + static_cast<std::ptrdiff_t>(m_), a[i].end(),
                binv_[i].begin());
    }
    xb_.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) xb_[i] += binv_[i][k] * sf_.rhs[k];
    }
    since_refactor_ = 0;
  }

 private:
  double column(std::size_t j, std::size_t i) const {
    if (j < n_) return sf_.columns[j][i];
    return j - n_ == i ? 1.0 : 0.0;
  }

  bool is_basic(std::size_t j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  std::vector<double> ftran(std::size_t j) const {
    std::vector<double> u(m_, 0.0);
    if (j < n_) {
      const auto& a = sf_.columns[j];
      for (std::size_t k = 0; k < m_; ++k) {
        if (a[k] == 0.0) continue;
        for (std::size_t i = 0; i < m_; ++i) u[i] += binv_[i][k] * a[k];
      }
    } else {
      for (std::size_t i = 0; i < m_; ++i) u[i] = binv_[i][j - n_];
    }
    return u;
  }

  void pivot(std::size_t r, std::size_t j, const std::vector<double>& u) {
    const double ur = u[r];
    const double t = xb_[r] / ur;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i != r) xb_[i] -= t * u[i];
    }
    xb_[r] = t;
    auto& pivot_row = binv_[r];
    for (auto& v : pivot_row) v /= ur;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || u[i] == 0.0) continue;
      const double f = u[i];
      auto& row = binv_[i];
      for (std::size_t k = 0; k < m_; ++k) row[k] -= f * pivot_row[k];
    }
    basis_[r] = j;
    ++iterations_;
    if (++since_refactor_ >= kRefactorEvery) refactor();
  }

  Status iterate() {
    std::vector<char> basic(n_ + m_, 0);
    while (iterations_ < kMaxIterations) {
      std::fill(basic.begin(), basic.end(), 0);
      for (std::size_t b : basis_) basic[b] = 1;
      const std::vector<double> y = duals();
      // Bland: lowest-index column with negative reduced cost.
      std::size_t entering = n_ + m_;
      const std::size_t limit = allow_artificial_entry_ ? n_ + m_ : n_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (basic[j]) continue;
        double d = cost_[j];
        if (j < n_) {
          const auto& a = sf_.columns[j];
          for (std::size_t i = 0; i < m_; ++i) d -= y[i] * a[i];
        } else {
          d -= y[j - n_];
        }
        if (d < -kOptTol) {
          entering = j;
          break;
        }
      }
      if (entering == n_ + m_) return Status::kOptimal;

      const std::vector<double> u = ftran(entering);
      const std::size_t leave = bland_ties_ ? strict_leaving_row(u) : harris_leaving_row(u);
      if (leave == m_) {
        ray_.assign(n_, 0.0);
        ray_[entering] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
          if (basis_[i] < n_) ray_[basis_[i]] = -u[i];
        }
        return Status::kUnbounded;
      }
      const bool degenerate = std::max(0.0, xb_[leave]) / u[leave] <= 1e-12;
      degenerate_run_ = degenerate ? degenerate_run_ + 1 : 0;
      bland_ties_ = degenerate_run_ >= kDegenerateRun;
      pivot(leave, entering, u);
    }
    throw std::runtime_error("simplex iteration limit exceeded");
  }

  // Exact minimum ratio, ties to the lowest basic index (Bland).
  std::size_t strict_leaving_row(const std::vector<double>& u) const {
    double best = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      if (u[i] > kPivotTol) best = std::min(best, std::max(0.0, xb_[i]) / u[i]);
    }
    std::size_t leave = m_;
    for (std::size_t i = 0; i < m_ && best < kInfinity; ++i) {
      if (u[i] <= kPivotTol) continue;
      const double ratio = std::max(0.0, xb_[i]) / u[i];
      if (ratio <= best + 1e-12 && (leave == m_ || basis_[i] < basis_[leave])) leave = i;
    }
    return leave;
  }

  // Two passes: a slightly relaxed bound on the step, then the largest pivot
  // element among the rows reaching it. Keeps the basis well conditioned.
  std::size_t harris_leaving_row(const std::vector<double>& u) const {
    double umax = 0.0;
    for (double v : u) umax = std::max(umax, v);
    const double tol = std::max(kPivotTol, 1e-9 * umax);
    double bound = kInfinity;
    for (std::size_t i = 0; i < m_; ++i) {
      if (u[i] > tol) bound = std::min(bound, (std::max(0.0, xb_[i]) + kHarrisTol) / u[i]);
    }
    std::size_t leave = m_;
    for (std::size_t i = 0; i < m_ && bound < kInfinity; ++i) {
      if (u[i] <= tol || std::max(0.0, xb_[i]) / u[i] > bound) continue;
      if (leave == m_ || u[i] > u[leave]) leave = i;
    }
    return leave;
  }

  StandardForm& sf_;
  std::size_t m_;
  std::size_t n_ = 0;
  std::vector<std::size_t> basis_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> xb_;
  std::vector<double> cost_;
  std::vector<double> ray_;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  bool allow_artificial_entry_ = false;
  bool bland_ties_ = false;
  std::size_t degenerate_run_ = 0;
};

std::vector<double> to_original(const StandardForm& sf, const std::vector<double>& xs,
                                bool direction) {
  std::vector<double> x(sf.map.size(), 0.0);
  for (std::size_t j = 0; j < sf.map.size(); ++j) {
    const ColumnMap& m = sf.map[j];
    double v = direction ? 0.0 : m.offset;
    if (m.col >= 0) v += m.sign * xs[m.col];
    if (m.col_neg >= 0) v -= xs[m.col_neg];
    x[j] = v;
  }
  return x;
}

}  // namespace

LPSolution solve_lp(const LPProblem& problem) {
  problem.check_well_formed();
  StandardForm sf = to_standard_form(problem);
  const double sense = problem.sense() == Sense::kMinimize ? 1.0 : -1.0;

  LPSolution sol;
  if (sf.rows == 0) {
    // Only bounds: each variable sits at its cheapest bound.
    std::vector<double> x(problem.num_variables(), 0.0);
    double value = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double c = sense * problem.objective()[j];
      const Bounds& b = problem.bounds(j);
      double v = std::isfinite(b.lower) ? b.lower : (std::isfinite(b.upper) ? b.upper : 0.0);
      if (c > 0) v = b.lower;
      if (c < 0) v = b.upper;
      if (!std::isfinite(v)) {
        sol.status = Status::kUnbounded;
        sol.ray.assign(x.size(), 0.0);
        sol.ray[j] = c > 0 ? -1.0 : 1.0;
        return sol;
      }
      x[j] = v;
      value += problem.objective()[j] * v;
    }
    sol.status = Status::kOptimal;
    sol.value = value;
    sol.dual_value = value;
    sol.primal = std::move(x);
    return sol;
  }

  Simplex simplex(sf);
  const double infeasibility = simplex.phase_one();
  double rhs_scale = 1.0;
  for (double b : sf.rhs) rhs_scale = std::max(rhs_scale, std::abs(b));
  if (infeasibility > kFeasTol * rhs_scale) {
    const std::vector<double> y = simplex.duals();
    sol.status = Status::kInfeasible;
    sol.farkas.resize(sf.original_rows);
    for (std::size_t i = 0; i < sf.original_rows; ++i) sol.farkas[i] = y[i] * sf.row_flip[i];
    sol.iterations = simplex.iterations();
    return sol;
  }
  simplex.drive_out_artificials();
  const Status st = simplex.phase_two();
  sol.iterations = simplex.iterations();
  if (st == Status::kUnbounded) {
    sol.status = Status::kUnbounded;
    sol.ray = to_original(sf, simplex.ray(), true);
    return sol;
  }
  simplex.refactor();
  const std::vector<double> xs = simplex.point();
  const std::vector<double> y = simplex.duals();
  sol.status = Status::kOptimal;
  sol.primal = to_original(sf, xs, false);
  double value = 0.0;
  for (std::size_t j = 0; j < sol.primal.size(); ++j) {
    value += problem.objective()[j] * sol.primal[j];
  }
  sol.value = value;
  // A well-conditioned basis reproduces the rows to roundoff; anything worse
  // means the factorization broke down and the point cannot be trusted.
  double scale = 1.0;
  for (double b : sf.rhs) scale = std::max(scale, std::abs(b));
  if (max_residual(problem, sol.primal) > 1e-7 * scale) {
    throw std::runtime_error("solve_lp: numerical breakdown (residual too large)");
  }
  double dual_obj = sf.objective_offset;
  for (std::size_t i = 0; i < sf.rows; ++i) dual_obj += y[i] * sf.rhs[i];
  sol.dual_value = sense * dual_obj;
  sol.duals.resize(sf.original_rows);
  for (std::size_t i = 0; i < sf.original_rows; ++i) {
    sol.duals[i] = sense * y[i] * sf.row_flip[i];
  }
  return sol;
}

}  // namespace superhedge::lp
