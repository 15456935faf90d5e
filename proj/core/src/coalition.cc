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


#include "rxmarket/coalition.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "rxmarket/lp.h"
#include "rxmarket/nearest_point.h"

namespace rxmarket {

CoalitionValues::CoalitionValues(const BidProfile& profile, const NetworkGraph& network,
                                 const AllocationGrid& grid)
    : profile_(profile), network_(network), grid_(grid),
      grand_(ClearMarket(profile, network, grid)) {}

Money CoalitionValues::operator()(Coalition s) const {
  if (s.empty()) return 0.0;
  if (s == network_.AllAreas()) return grand_.value;
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(s.mask());
    if (it != cache_.end()) return it->second;
  }
  const Money v = CoalitionalValue(profile_, s, network_, grid_).value;
  std::unique_lock lock(mutex_);
  cache_.emplace(s.mask(), v);
  return v;
}

void CoalitionValues::PrecomputeAll() const {
  const std::uint64_t end = std::uint64_t{1} << num_areas();
  for (std::uint64_t m = 0; m < end; ++m) (*this)(Coalition(m));
}

const char* MlcSelectionName(MlcSelection selection) {
  switch (selection) {
    case MlcSelection::kMinDistance:
      return "min-distance";
    case MlcSelection::kVertex:
      return "vertex";
  }
  return "?";
}

namespace {

Money SumOver(const PayoffVector& u, Coalition s) {
  Money total = 0.0;
  for (std::size_t a : s.Members()) total += u[a];
  return total;
}

Money Sum(const PayoffVector& u) {
  Money total = 0.0;
  for (Money x : u) total += x;
  return total;
}

void CheckPayoffSize(const CoalitionValues& values, const PayoffVector& u) {
  if (u.size() != values.num_areas()) {
    throw Error("dimension-mismatch", "payoff vector has " + std::to_string(u.size()) +
                                          " entries for " +
                                          std::to_string(values.num_areas()) + " areas");
  }
}

// Indicator of `s` over the payoff variables, padded to `width`.
std::vector<double> CoalitionRow(Coalition s, std::size_t width) {
  std::vector<double> row(width, 0.0);
  for (std::size_t a : s.Members()) row[a] = 1.0;
  return row;
}

std::vector<double> BudgetRow(std::size_t n, std::size_t width) {
  std::vector<double> row(width, 0.0);
  std::fill(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n), 1.0);
  return row;
}

// Variables [u_0 .. u_{n-1}, eps]; minimize eps.
LinearProgram LeastCoreProgram(const CoalitionValues& values) {
  const std::size_t n = values.num_areas();
  LinearProgram lp;
  for (std::size_t a = 0; a < n; ++a) lp.AddVariable(0.0, -kInfinity, kInfinity);
  lp.AddVariable(1.0, 0.0, kInfinity);
  lp.AddRow(BudgetRow(n, n + 1), RowSense::kEqual, values.Grand());
  return lp;
}

void AddLeastCoreCut(LinearProgram& lp, const CoalitionValues& values, Coalition s) {
  const std::size_t n = values.num_areas();
  auto row = CoalitionRow(s, n + 1);
  row[n] = 1.0;
  lp.AddRow(std::move(row), RowSense::kGreaterEqual, values(s));
}

LeastCoreResult Finish(const CoalitionValues& values, const LpSolution& sol,
                       std::vector<Coalition> cuts) {
  const std::size_t n = values.num_areas();
  LeastCoreResult r;
  r.witness.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
  r.epsilon_star = std::max(0.0, sol.x[n]);
  r.cuts = std::move(cuts);
  const Coalition all = values.network().AllAreas();
  for (std::uint64_t m = 1; m < all.mask(); ++m) {
    const Coalition s(m);
    const Money v = values(s);
    if (std::abs(SumOver(r.witness, s) + r.epsilon_star - v) <= 1e-7 * (1.0 + std::abs(v))) {
      r.binding.push_back(s);
    }
  }
  return r;
}

LpSolution SolveOrThrow(const LinearProgram& lp, const LpOptions& options, const char* what) {
  LpSolution sol = SolveLp(lp, options);
  if (sol.status != LpStatus::kOptimal) {
    throw Error("numerical-failure",
                std::string(what) + " program is " + LpStatusName(sol.status));
  }
  return sol;
}

}  // namespace

CoreCheck EpsilonCoreContains(const CoalitionValues& values, const PayoffVector& u, Money eps,
                              double tolerance) {
  if (eps < 0.0) throw Error("negative-epsilon", "eps must be nonnegative");
  CheckPayoffSize(values, u);
  CoreCheck check;
  check.budget_gap = Sum(u) - values.Grand();
  const Coalition all = values.network().AllAreas();
  for (std::uint64_t m = 1; m < all.mask(); ++m) {
    const Coalition s(m);
    const Money amount = values(s) - eps - SumOver(u, s);
    if (amount > tolerance) check.violated.push_back({s, amount});
  }
  check.contained = std::abs(check.budget_gap) <= tolerance && check.violated.empty();
  return check;
}

std::optional<CoalitionViolation> SeparationOracle(const CoalitionValues& values,
                                                   const PayoffVector& u, Money eps,
                                                   double tolerance) {
  CheckPayoffSize(values, u);
  std::optional<CoalitionViolation> worst;
  const Coalition all = values.network().AllAreas();
  for (std::uint64_t m = 1; m < all.mask(); ++m) {
    const Coalition s(m);
    const Money amount = values(s) - eps - SumOver(u, s);
    if (amount > tolerance && (!worst || amount > worst->amount)) worst = {s, amount};
  }
  return worst;
}

LeastCoreResult LeastCoreEpsilon(const CoalitionValues& values,
                                 const LeastCoreOptions& options) {
  const std::size_t n = values.num_areas();
  LpOptions lp_options;
  lp_options.tolerance = options.tolerance;

  LinearProgram lp = LeastCoreProgram(values);
  std::vector<Coalition> cuts;
  if (n > 1) {
    for (std::size_t a = 0; a < n; ++a) {
      cuts.push_back(Coalition::Singleton(a));
      AddLeastCoreCut(lp, values, cuts.back());
    }
  }

  for (std::size_t round = 1; round <= options.max_rounds; ++round) {
    const LpSolution sol = SolveOrThrow(lp, lp_options, "least-core");
    PayoffVector u(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    auto cut = SeparationOracle(values, u, sol.x[n], options.tolerance);
    if (cut && std::find(cuts.begin(), cuts.end(), cut->coalition) != cuts.end()) {
      // Already in the program; the excess is rounding in the LP.
      cut.reset();
    }
    if (!cut) {
      LeastCoreResult r = Finish(values, sol, std::move(cuts));
      r.iterations = round;
      return r;
    }
    cuts.push_back(cut->coalition);
    AddLeastCoreCut(lp, values, cut->coalition);
  }

  if (n <= options.enumeration_limit) {
    LeastCoreResult r = LeastCoreEpsilonFull(values, options);
    r.iterations = options.max_rounds;
    return r;
  }
  throw Error("no-convergence", "least-core constraint generation did not converge in " +
                                    std::to_string(options.max_rounds) + " rounds");
}

LeastCoreResult LeastCoreEpsilonFull(const CoalitionValues& values,
                                     const LeastCoreOptions& options) {
  LpOptions lp_options;
  lp_options.tolerance = options.tolerance;
  LinearProgram lp = LeastCoreProgram(values);
  std::vector<Coalition> cuts;
  const Coalition all = values.network().AllAreas();
  for (std::uint64_t m = 1; m < all.mask(); ++m) {
    cuts.emplace_back(m);
    AddLeastCoreCut(lp, values, cuts.back());
  }
  const LpSolution sol = SolveOrThrow(lp, lp_options, "least-core");
  LeastCoreResult r = Finish(values, sol, std::move(cuts));
  r.iterations = 1;
  r.used_full_enumeration = true;
  return r;
}

PayoffVector VcgUtilities(const CoalitionValues& values) {
  const std::size_t n = values.num_areas();
  const Coalition all = values.network().AllAreas();
  PayoffVector u(n);
  for (std::size_t a = 0; a < n; ++a) u[a] = values.Grand() - values(all.Without(a));
  return u;
}

MlcResult MinMaxLeastCoreUtilities(const CoalitionValues& values,
                                   const LeastCoreOptions& options) {
  const std::size_t n = values.num_areas();
  MlcResult result;
  result.selection = options.selection;
  result.least_core = LeastCoreEpsilon(values, options);
  result.epsilon_star = result.least_core.epsilon_star;
  result.vcg_utilities = VcgUtilities(values);
  const Money eps = result.epsilon_star;
  const PayoffVector& vcg = result.vcg_utilities;

  LpOptions lp_options;
  lp_options.tolerance = options.tolerance;

  // Variables [u_0 .. u_{n-1}, t]; minimize t.
  LinearProgram lp;
  for (std::size_t a = 0; a < n; ++a) lp.AddVariable(0.0, -kInfinity, kInfinity);
  lp.AddVariable(1.0, -kInfinity, kInfinity);
  lp.AddRow(BudgetRow(n, n + 1), RowSense::kEqual, values.Grand());
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> row(n + 1, 0.0);
    row[a] = 1.0;
    row[n] = -1.0;
    lp.AddRow(std::move(row), RowSense::kLessEqual, vcg[a]);
  }
  std::vector<Coalition> cuts = result.least_core.cuts;
  for (Coalition s : cuts) {
    lp.AddRow(CoalitionRow(s, n + 1), RowSense::kGreaterEqual, values(s) - eps);
  }

  PayoffVector u;
  Money t = 0.0;
  for (std::size_t round = 1;; ++round) {
    if (round > options.max_rounds) {
      throw Error("no-convergence", "min-max least-core program did not converge");
    }
    const LpSolution sol = SolveOrThrow(lp, lp_options, "min-max least-core");
    u.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(n));
    t = sol.x[n];
    result.iterations = round;
    auto cut = SeparationOracle(values, u, eps, options.tolerance);
    if (!cut || std::find(cuts.begin(), cuts.end(), cut->coalition) != cuts.end()) break;
    cuts.push_back(cut->coalition);
    lp.AddRow(CoalitionRow(cut->coalition, n + 1), RowSense::kGreaterEqual,
              values(cut->coalition) - eps);
  }

  if (options.selection == MlcSelection::kMinDistance && n > 0) {
    // Project ū^VCG onto {ū in the ε*-core : ū_a - ū^VCG_a <= t*}.
    std::vector<LinearProgram::Row> rows;
    rows.push_back({BudgetRow(n, n), RowSense::kEqual, values.Grand()});
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<double> row(n, 0.0);
      row[a] = 1.0;
      rows.push_back({std::move(row), RowSense::kLessEqual, vcg[a] + t});
    }
    for (Coalition s : cuts) {
      rows.push_back({CoalitionRow(s, n), RowSense::kGreaterEqual, values(s) - eps});
    }
    NearestPointOptions qp_options;
    qp_options.tolerance = options.tolerance;
    const PayoffVector start = u;
    for (std::size_t round = 0;; ++round) {
      if (round > options.max_rounds) {
        throw Error("no-convergence", "min-distance refinement did not converge");
      }
      auto projected = NearestFeasiblePoint(vcg, rows, start, qp_options);
      auto cut = SeparationOracle(values, projected.x, eps, options.tolerance);
      if (!cut || std::find(cuts.begin(), cuts.end(), cut->coalition) != cuts.end()) {
        u = std::move(projected.x);
        break;
      }
      cuts.push_back(cut->coalition);
      rows.push_back({CoalitionRow(cut->coalition, n), RowSense::kGreaterEqual,
                      values(cut->coalition) - eps});
    }
  }

  result.utilities = std::move(u);
  result.max_gap = -kInfinity;
  for (std::size_t a = 0; a < n; ++a) {
    result.max_gap = std::max(result.max_gap, result.utilities[a] - vcg[a]);
  }
  if (n == 0) result.max_gap = 0.0;
  return result;
}

std::vector<UpperBound> UpperBoundSystem(const CoalitionValues& values, Money eps) {
  if (eps < 0.0) throw Error("negative-epsilon", "eps must be nonnegative");
  const std::size_t n = values.num_areas();
  std::vector<UpperBound> out;
  const std::uint64_t end = std::uint64_t{1} << n;
  out.reserve(end);
  for (std::uint64_t m = 0; m < end; ++m) {
    const Coalition s(m);
    out.push_back({s, values.Grand() - values(s.ComplementIn(n)) + eps});
  }
  return out;
}

bool SatisfiesUpperBoundSystem(const CoalitionValues& values, const PayoffVector& u, Money eps,
                               double tolerance) {
  CheckPayoffSize(values, u);
  if (std::abs(Sum(u) - values.Grand()) > tolerance) return false;
  for (const UpperBound& b : UpperBoundSystem(values, eps)) {
    if (SumOver(u, b.coalition) > b.bound + tolerance) return false;
  }
  return true;
}

PayoffVector StarCoreWitness(const CoalitionValues& values) {
  auto center = values.network().StarCenter();
  if (!center) throw Error("not-a-star", "the network is not a star");
  PayoffVector u(values.num_areas(), 0.0);
  u[*center] = values.Grand();
  return u;
}

}  // namespace rxmarket
