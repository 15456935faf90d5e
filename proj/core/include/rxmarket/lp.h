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

// Small dense linear programs: two-phase tableau simplex with Bland's rule.
//
// Intended for the least-core programs (tens of variables, up to a few
// thousand rows). The returned point is checked against the original rows
// and bounds; a failed check raises Error("numerical-failure") rather than
// returning a wrong answer.

#ifndef RXMARKET_LP_H_
#define RXMARKET_LP_H_

#include <cstddef>
#include <limits>
#include <vector>

#include "rxmarket/common.h"

namespace rxmarket {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { kLessEqual, kEqual, kGreaterEqual };
enum class ObjectiveSense { kMinimize, kMaximize };
enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LinearProgram {
  struct Row {
    std::vector<double> coefficients;
    RowSense sense = RowSense::kLessEqual;
    double rhs = 0.0;
  };

  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<Row> rows;

  std::size_t num_variables() const { return objective.size(); }

  // Returns the new variable's index. Existing rows are widened with zeros.
  std::size_t AddVariable(double cost, double lo = 0.0, double hi = kInfinity);
  void AddRow(std::vector<double> coefficients, RowSense sense, double rhs);
};

struct LpOptions {
  // Feasibility and optimality tolerance.
  double tolerance = kTolerance;
  // Pivot elements smaller than this are treated as zero.
  double pivot_tolerance = 1e-11;
  std::size_t max_pivots = 1'000'000;
};

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

LpSolution SolveLp(const LinearProgram& program, const LpOptions& options = {});

const char* LpStatusName(LpStatus status);

}  // namespace rxmarket

#endif  // RXMARKET_LP_H_
