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

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace rxmarket {
namespace {

// Row in the form a.x >= b, or a.x == b when `equality` is set.
struct Constraint {
  Eigen::VectorXd a;
  double b = 0.0;
  bool equality = false;
};

}  // namespace

NearestPointResult NearestFeasiblePoint(std::span<const double> target,
                                        std::span<const LinearProgram::Row> rows,
                                        std::span<const double> start,
                                        const NearestPointOptions& options) {
  const auto n = static_cast<Eigen::Index>(target.size());
  if (start.size() != target.size()) {
    throw Error("dimension-mismatch", "start and target differ in length");
  }
  const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(target.data(), n);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), n);

  std::vector<Constraint> cons;
  cons.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.coefficients.size() != target.size()) {
      throw Error("dimension-mismatch", "constraint row width does not match the point");
    }
    Constraint k;
    k.a = Eigen::Map<const Eigen::VectorXd>(row.coefficients.data(), n);
    k.b = row.rhs;
    if (row.sense == RowSense::kLessEqual) {
      k.a = -k.a;
      k.b = -k.b;
    }
    k.equality = row.sense == RowSense::kEqual;
    cons.push_back(std::move(k));
  }

  std::vector<std::size_t> working;
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const double r = cons[i].a.dot(x) - cons[i].b;
    const double scale = options.tolerance * (1.0 + std::abs(cons[i].b) +
                                              cons[i].a.cwiseAbs().dot(x.cwiseAbs()));
    if (cons[i].equality ? std::abs(r) > scale : r < -scale) {
      throw Error("infeasible-start",
                  "start point violates row " + std::to_string(i) + " by " + std::to_string(r));
    }
    if (cons[i].equality) working.push_back(i);
  }

  NearestPointResult result;
  std::vector<char> in_working(cons.size(), 0);
  for (std::size_t i : working) in_working[i] = 1;

  while (true) {
    if (++result.iterations > options.max_iterations) {
      throw Error("numerical-failure", "active-set iteration limit exceeded");
    }
    const Eigen::VectorXd g = x - c;
    Eigen::VectorXd p = -g;
    Eigen::VectorXd lambda;
    if (!working.empty()) {
      Eigen::MatrixXd mt(n, static_cast<Eigen::Index>(working.size()));
      for (std::size_t k = 0; k < working.size(); ++k) {
        mt.col(static_cast<Eigen::Index>(k)) = cons[working[k]].a;
      }
      lambda = mt.completeOrthogonalDecomposition().solve(g);
      p = mt * lambda - g;
    }

    if (p.lpNorm<Eigen::Infinity>() <= options.tolerance * (1.0 + g.lpNorm<Eigen::Infinity>())) {
      std::size_t drop = working.size();
      double most_negative = -options.tolerance;
      for (std::size_t k = 0; k < working.size(); ++k) {
        if (cons[working[k]].equality) continue;
        if (lambda(static_cast<Eigen::Index>(k)) < most_negative) {
          most_negative = lambda(static_cast<Eigen::Index>(k));
          drop = k;
        }
      }
      if (drop == working.size()) break;
      in_working[working[drop]] = 0;
      working.erase(working.begin() + static_cast<std::ptrdiff_t>(drop));
      continue;
    }

    double alpha = 1.0;
    std::size_t blocking = cons.size();
    const double p_norm = p.norm();
    for (std::size_t i = 0; i < cons.size(); ++i) {
      if (in_working[i] || cons[i].equality) continue;
      const double ap = cons[i].a.dot(p);
      if (ap >= -1e-14 * cons[i].a.norm() * p_norm) continue;
      const double slack = std::max(cons[i].a.dot(x) - cons[i].b, 0.0);
      const double step = slack / -ap;
      if (step < alpha) {
        alpha = step;
        blocking = i;
      }
    }
    x += alpha * p;
    if (blocking < cons.size()) {
      working.push_back(blocking);
      in_working[blocking] = 1;
    }
  }

  result.x.assign(x.data(), x.data() + n);
  result.active = working;
  std::sort(result.active.begin(), result.active.end());
  return result;
}

}  // namespace rxmarket
