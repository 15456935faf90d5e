// Copyright 2026 The rxmarket Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rxmarket/lp.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace rxmarket {

std::size_t LinearProgram::AddVariable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (Row& r : rows) r.coefficients.resize(objective.size(), 0.0);
  return objective.size() - 1;
}

void LinearProgram::AddRow(std::vector<double> coefficients, RowSense sense, double rhs) {
  coefficients.resize(objective.size(), 0.0);
  rows.push_back(Row{std::move(coefficients), sense, rhs});
}

const char* LpStatusName(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
  }
  return "?";
}

namespace {

// x_j = offset + Σ sign * y_column over nonnegative standard-form columns.
struct VariableMap {
  double offset = 0.0;
  std::vector<std::pair<std::size_t, double>> terms;
};

// Dense tableau; row `rows()` is the reduced-cost row and column `cols()`
// holds right-hand sides (the objective row's rhs is minus the objective).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }

  void Pivot(std::size_t r, std::size_t c) {
    const std::size_t width = cols_ + 1;
    double* pivot_row = &data_[r * width];
    const double inv = 1.0 / pivot_row[c];
    for (std::size_t j = 0; j < width; ++j) pivot_row[j] *= inv;
    pivot_row[c] = 1.0;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      double* row = &data_[i * width];
      const double f = row[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) row[j] -= f * pivot_row[j];
      row[c] = 0.0;
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

enum class PhaseResult { kOptimal, kUnbounded };

// Bland's rule: lowest-index improving column; ratio ties go to the lowest
// basic variable index.
PhaseResult RunSimplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_cols,
                       const LpOptions& options, std::size_t& pivots) {
  const double rc_tol = options.tolerance * 0.1;
  while (true) {
    std::size_t entering = allowed_cols;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      if (t.cost(j) < -rc_tol) {
        entering = j;
        break;
      }
    }
    if (entering == allowed_cols) return PhaseResult::kOptimal;

    std::size_t leaving = t.rows();
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      const double a = t.at(i, entering);
      if (a <= options.pivot_tolerance) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / a;
      if (leaving == t.rows() || ratio < best_ratio - 1e-12 * (1.0 + best_ratio) ||
          (ratio <= best_ratio + 1e-12 * (1.0 + best_ratio) && basis[i] < basis[leaving])) {
        if (leaving == t.rows() || ratio < best_ratio) best_ratio = ratio;
        leaving = i;
      }
    }
    if (leaving == t.rows()) return PhaseResult::kUnbounded;

    if (++pivots > options.max_pivots) {
      throw Error("numerical-failure", "simplex pivot limit exceeded");
    }
    t.Pivot(leaving, entering);
    basis[leaving] = entering;
  }
}

}  // namespace

LpSolution SolveLp(const LinearProgram& program, const LpOptions& options) {
  const std::size_t n = program.num_variables();
  if (program.lower.size() != n || program.upper.size() != n) {
    throw Error("dimension-mismatch", "variable bounds do not match objective size");
  }
  for (const auto& row : program.rows) {
    if (row.coefficients.size() != n) {
      throw Error("dimension-mismatch", "constraint row width does not match objective size");
    }
  }

  // Map every variable onto nonnegative columns.
  std::vector<VariableMap> maps(n);
  std::vector<std::pair<std::size_t, double>> upper_rows;  // (column, width)
  std::size_t ny = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = program.lower[j];
    const double hi = program.upper[j];
    if (lo > hi) {
      return LpSolution{LpStatus::kInfeasible, {}, 0.0, 0};
    }
    if (std::isfinite(lo)) {
      maps[j].offset = lo;
      maps[j].terms.emplace_back(ny, 1.0);
      if (std::isfinite(hi)) upper_rows.emplace_back(ny, hi - lo);
      ++ny;
    } else if (std::isfinite(hi)) {
      maps[j].offset = hi;
      maps[j].terms.emplace_back(ny++, -1.0);
    } else {
      maps[j].terms.emplace_back(ny++, 1.0);
      maps[j].terms.emplace_back(ny++, -1.0);
    }
  }

  struct StdRow {
    std::vector<double> a;
    RowSense sense;
    double b;
  };
  std::vector<StdRow> std_rows;
  std_rows.reserve(program.rows.size() + upper_rows.size());
  for (const auto& row : program.rows) {
    StdRow r{std::vector<double>(ny, 0.0), row.sense, row.rhs};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = row.coefficients[j];
      if (a == 0.0) continue;
      r.b -= a * maps[j].offset;
      for (auto [col, sign] : maps[j].terms) r.a[col] += a * sign;
    }
    std_rows.push_back(std::move(r));
  }
  for (auto [col, width] : upper_rows) {
    StdRow r{std::vector<double>(ny, 0.0), RowSense::kLessEqual, width};
    r.a[col] = 1.0;
    std_rows.push_back(std::move(r));
  }
  for (auto& r : std_rows) {
    if (r.b < 0.0) {
      for (double& a : r.a) a = -a;
      r.b = -r.b;
      if (r.sense == RowSense::kLessEqual) {
        r.sense = RowSense::kGreaterEqual;
      } else if (r.sense == RowSense::kGreaterEqual) {
        r.sense = RowSense::kLessEqual;
      }
    }
  }

  const std::size_t m = std_rows.size();
  std::size_t num_slack = 0;
  std::size_t num_art = 0;
  for (const auto& r : std_rows) {
    if (r.sense != RowSense::kEqual) ++num_slack;
    if (r.sense != RowSense::kLessEqual) ++num_art;
  }
  const std::size_t first_slack = ny;
  const std::size_t first_art = ny + num_slack;
  const std::size_t cols = first_art + num_art;

  Tableau t(m, cols);
  std::vector<std::size_t> basis(m);
  double max_b = 0.0;
  {
    std::size_t s = first_slack;
    std::size_t art = first_art;
    for (std::size_t i = 0; i < m; ++i) {
      const StdRow& r = std_rows[i];
      for (std::size_t j = 0; j < ny; ++j) t.at(i, j) = r.a[j];
      t.rhs(i) = r.b;
      max_b = std::max(max_b, r.b);
      switch (r.sense) {
        case RowSense::kLessEqual:
          t.at(i, s) = 1.0;
          basis[i] = s++;
          break;
        case RowSense::kGreaterEqual:
          t.at(i, s++) = -1.0;
          t.at(i, art) = 1.0;
          basis[i] = art++;
          break;
        case RowSense::kEqual:
          t.at(i, art) = 1.0;
          basis[i] = art++;
          break;
      }
    }
  }

  std::size_t pivots = 0;

  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) t.cost(j) -= t.at(i, j);
      t.cost(cols) -= t.rhs(i);
    }
    RunSimplex(t, basis, cols, options, pivots);
    const double infeasibility = -t.cost(cols);
    if (infeasibility > options.tolerance * (1.0 + max_b)) {
      return LpSolution{LpStatus::kInfeasible, {}, 0.0, pivots};
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and keep a basic artificial at zero.
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < first_art) continue;
      for (std::size_t j = 0; j < first_art; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          t.Pivot(i, j);
          basis[i] = j;
          ++pivots;
          break;
        }
      }
    }
  }

  // Phase 2 over structural and slack columns.
  std::vector<double> cost(cols, 0.0);
  double cost_offset = 0.0;
  const double flip = program.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = flip * program.objective[j];
    cost_offset += c * maps[j].offset;
    for (auto [col, sign] : maps[j].terms) cost[col] += c * sign;
  }
  for (std::size_t j = 0; j <= cols; ++j) t.cost(j) = j < cols ? cost[j] : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double cb = cost[basis[i]];
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= cols; ++j) t.cost(j) -= cb * t.at(i, j);
  }
  for (std::size_t j = first_art; j < cols; ++j) t.cost(j) = 0.0;

  const PhaseResult phase2 = RunSimplex(t, basis, first_art, options, pivots);

  std::vector<double> y(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) y[basis[i]] = std::max(t.rhs(i), 0.0);
  LpSolution solution;
  solution.pivots = pivots;
  solution.x.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double v = maps[j].offset;
    for (auto [col, sign] : maps[j].terms) v += sign * y[col];
    solution.x[j] = v;
  }
  if (phase2 == PhaseResult::kUnbounded) {
    solution.status = LpStatus::kUnbounded;
    solution.objective = program.sense == ObjectiveSense::kMaximize ? kInfinity : -kInfinity;
    return solution;
  }
  solution.status = LpStatus::kOptimal;
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.objective += program.objective[j] * solution.x[j];
  (void)cost_offset;

  // Certify the point against the original data.
  for (std::size_t r = 0; r < program.rows.size(); ++r) {
    const auto& row = program.rows[r];
    double lhs = 0.0;
    double scale = 1.0 + std::abs(row.rhs);
    for (std::size_t j = 0; j < n; ++j) {
      lhs += row.coefficients[j] * solution.x[j];
      scale += std::abs(row.coefficients[j] * solution.x[j]);
    }
    double violation = 0.0;
    switch (row.sense) {
      case RowSense::kLessEqual:
        violation = lhs - row.rhs;
        break;
      case RowSense::kGreaterEqual:
        violation = row.rhs - lhs;
        break;
      case RowSense::kEqual:
        violation = std::abs(lhs - row.rhs);
        break;
    }
    if (violation > options.tolerance * scale) {
      throw Error("numerical-failure", "simplex solution violates row " + std::to_string(r) +
                                           " by " + std::to_string(violation));
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double x = solution.x[j];
    const double scale = 1.0 + std::abs(x);
    if (x < program.lower[j] - options.tolerance * scale ||
        x > program.upper[j] + options.tolerance * scale) {
      throw Error("numerical-failure",
                  "simplex solution violates the bounds of variable " + std::to_string(j));
    }
  }
  return solution;
}

}  // namespace rxmarket
