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

// Euclidean projection of a point onto a polyhedron given by linear rows,
// solved with a primal active-set method started from a feasible point.

#ifndef RXMARKET_NEAREST_POINT_H_
#define RXMARKET_NEAREST_POINT_H_

#include <cstddef>
#include <span>
#include <vector>

#include "rxmarket/lp.h"

namespace rxmarket {

struct NearestPointOptions {
  double tolerance = kTolerance;
  std::size_t max_iterations = 10'000;
};

struct NearestPointResult {
  std::vector<double> x;
  // Rows in the final working set.
  std::vector<std::size_t> active;
  std::size_t iterations = 0;
};

// argmin ||x - target||^2 subject to `rows`. `start` must satisfy every row;
// otherwise Error("infeasible-start") is thrown. Error("numerical-failure")
// signals that the iteration cap was hit.
NearestPointResult NearestFeasiblePoint(std::span<const double> target,
                                        std::span<const LinearProgram::Row> rows,
                                        std::span<const double> start,
                                        const NearestPointOptions& options = {});

}  // namespace rxmarket

#endif  // RXMARKET_NEAREST_POINT_H_
