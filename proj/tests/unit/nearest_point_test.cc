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


#include "rxmarket/nearest_point.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

#include "rxmarket/bids.h"

namespace rxmarket {
namespace {

using Row = LinearProgram::Row;

std::vector<Row> Box(const std::vector<double>& lo, const std::vector<double>& hi) {
  std::vector<Row> rows;
  for (std::size_t j = 0; j < lo.size(); ++j) {
    std::vector<double> e(lo.size(), 0.0);
    e[j] = 1.0;
    rows.push_back({e, RowSense::kGreaterEqual, lo[j]});
    rows.push_back({e, RowSense::kLessEqual, hi[j]});
  }
  return rows;
}

// Sort-based projection onto {x >= 0, sum x = 1}.
std::vector<double> SimplexProjection(std::vector<double> y) {
  std::vector<double> s = y;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    cum += s[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (s[k] - t > 0) theta = t;
  }
  for (double& v : y) v = std::max(v - theta, 0.0);
  return y;
}

TEST(NearestFeasiblePoint, HalfSpace) {
  const std::vector<Row> rows = {{{1.0, 1.0}, RowSense::kLessEqual, 1.0}};
  const std::vector<double> target = {2.0, 1.0}, start = {0.0, 0.0};
  const auto r = NearestFeasiblePoint(target, rows, start);
  EXPECT_NEAR(r.x[0], 1.0, 1e-9);
  EXPECT_NEAR(r.x[1], 0.0, 1e-9);
  EXPECT_EQ(r.active, (std::vector<std::size_t>{0}));
}

TEST(NearestFeasiblePoint, InteriorTargetIsReturned) {
  const auto rows = Box({-1, -1}, {1, 1});
  const std::vector<double> target = {0.3, -0.2}, start = {1.0, 1.0};
  const auto r = NearestFeasiblePoint(target, rows, start);
  EXPECT_NEAR(r.x[0], 0.3, 1e-9);
  EXPECT_NEAR(r.x[1], -0.2, 1e-9);
  EXPECT_TRUE(r.active.empty());
}

TEST(NearestFeasiblePoint, RandomBoxesMatchClamp) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 6;
    std::vector<double> lo(n), hi(n), target(n), start(n);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = UniformDraw(rng, -2, 0);
      hi[j] = UniformDraw(rng, 0, 2);
      target[j] = UniformDraw(rng, -4, 4);
      start[j] = UniformDraw(rng, lo[j], hi[j]);
    }
    const auto r = NearestFeasiblePoint(target, Box(lo, hi), start);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(r.x[j], std::clamp(target[j], lo[j], hi[j]), 1e-9) << "trial " << trial;
    }
  }
}

TEST(NearestFeasiblePoint, RandomSimplexMatchesSortProjection) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 5;
    std::vector<Row> rows;
    rows.push_back({std::vector<double>(n, 1.0), RowSense::kEqual, 1.0});
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      rows.push_back({e, RowSense::kGreaterEqual, 0.0});
    }
    std::vector<double> target(n);
    for (double& t : target) t = UniformDraw(rng, -1, 2);
    const std::vector<double> start(n, 1.0 / static_cast<double>(n));
    const auto r = NearestFeasiblePoint(target, rows, start);
    const auto expected = SimplexProjection(target);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_NEAR(r.x[j], expected[j], 1e-9) << "trial " << trial;
    }
  }
}

TEST(NearestFeasiblePoint, InfeasibleStartThrows) {
  const std::vector<Row> rows = {{{1.0}, RowSense::kLessEqual, 1.0}};
  const std::vector<double> target = {0.0}, start = {2.0};
  try {
    NearestFeasiblePoint(target, rows, start);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "infeasible-start");
  }
}

}  // namespace
}  // namespace rxmarket
