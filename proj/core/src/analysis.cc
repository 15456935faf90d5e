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


#include "rxmarket/analysis.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include <Eigen/Dense>

#include "rxmarket/allocation.h"

namespace rxmarket {

EpsilonBarEstimate EstimateEpsilonBar(const NetworkGraph& network, const AllocationGrid& grid,
                                      const EpsilonBarOptions& options) {
  const CoefficientRanges ranges = options.ranges;
  return EstimateEpsilonBar(
      network, grid,
      [&network, &grid, ranges](std::uint64_t seed) {
        return SampleValuationProfile(network, grid, ranges, seed);
      },
      options);
}

EpsilonBarEstimate EstimateEpsilonBar(const NetworkGraph& network, const AllocationGrid& grid,
                                      const ProfileSampler& sampler,
                                      const EpsilonBarOptions& options) {
  if (options.samples == 0) throw Error("bad-samples", "at least one sample is required");
  for (double level : options.quantile_levels) {
    if (!(level >= 0.0 && level <= 1.0)) {
      throw Error("bad-quantile", "quantile levels must lie in [0,1]");
    }
  }
  const std::size_t n = options.samples;
  std::vector<Money> eps(n);

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      const BidProfile profile = sampler(options.seed + i);
      const CoalitionValues values(profile, network, grid);
      eps[i] = LeastCoreEpsilon(values, options.least_core).epsilon_star;
    }
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, n);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, threads);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EpsilonBarEstimate est;
  est.samples = n;
  est.seed = options.seed;
  est.ranges = options.ranges;
  est.max = eps[0];
  Money total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += eps[i];
    if (eps[i] > est.max) {
      est.max = eps[i];
      est.argmax = i;
    }
  }
  est.mean = total / static_cast<double>(n);
  std::sort(eps.begin(), eps.end());
  for (double level : options.quantile_levels) {
    const double h = level * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, n - 1);
    est.quantiles.emplace_back(level, eps[lo] + (h - static_cast<double>(lo)) * (eps[hi] - eps[lo]));
  }
  return est;
}

BidTransform ScaleTransform(double k) {
  return [k](std::size_t, const BidTable& truth) { return truth.Scaled(k); };
}

namespace {

Money TotalTrueUtility(const PaymentReport& report, Coalition s) {
  Money total = 0.0;
  for (std::size_t a : s.Members()) total += report.areas[a].true_utility.value();
  return total;
}

}  // namespace

ManipulationOutcome GroupManipulationExperiment(const BidProfile& truth, Coalition s,
                                                const BidTransform& transform,
                                                std::string strategy,
                                                const NetworkGraph& network,
                                                const AllocationGrid& grid,
                                                std::optional<Money> epsilon_bar,
                                                const LeastCoreOptions& options) {
  const Coalition all = network.AllAreas();
  if (s.empty() || s == all || !s.IsSubsetOf(all)) {
    throw Error("bad-coalition", "coalition must be a nonempty proper subset of the areas");
  }
  BidProfile manipulated = truth;
  for (std::size_t a : s.Members()) manipulated = manipulated.WithTable(a, transform(a, truth[a]));

  ManipulationOutcome out;
  out.coalition = s;
  out.strategy = std::move(strategy);
  out.vcg.mechanism = Mechanism::kVcg;
  out.mlc.mechanism = Mechanism::kMlc;

  {
    const CoalitionValues values(truth, network, grid);
    PaymentReport vcg = VcgPayments(values);
    PaymentReport mlc = MlcPayments(values, options);
    AttachTrueUtilities(vcg, truth, network);
    AttachTrueUtilities(mlc, truth, network);
    out.vcg.truthful_total = TotalTrueUtility(vcg, s);
    out.mlc.truthful_total = TotalTrueUtility(mlc, s);
    out.epsilon_star_truthful = mlc.epsilon_star.value_or(0.0);
  }
  {
    const CoalitionValues values(manipulated, network, grid);
    PaymentReport vcg = VcgPayments(values);
    PaymentReport mlc = MlcPayments(values, options);
    AttachTrueUtilities(vcg, truth, network);
    AttachTrueUtilities(mlc, truth, network);
    out.vcg.manipulated_total = TotalTrueUtility(vcg, s);
    out.mlc.manipulated_total = TotalTrueUtility(mlc, s);
    out.epsilon_star_manipulated = mlc.epsilon_star.value_or(0.0);
  }

  // S as one area bidding its merged true valuation, the others truthful.
  const MergedBid merged = MergeBids(truth, s, network, grid);
  std::vector<const BidTable*> tables = {&merged.table};
  for (std::size_t a = 0; a < network.num_areas(); ++a) {
    if (!s.Contains(a)) tables.push_back(&truth[a]);
  }
  const auto internal = network.InternalLinks(s);
  std::vector<std::size_t> free_links;
  for (std::size_t e = 0; e < network.num_links(); ++e) {
    if (std::find(internal.begin(), internal.end(), e) == internal.end()) free_links.push_back(e);
  }
  const auto merged_market = MaximizeOverLinks(tables, free_links, grid.DefaultIndices(), grid);
  const Money rest = CoalitionalValue(truth, s.ComplementIn(network.num_areas()), network, grid).value;
  out.merged_vcg_utility = merged_market.value().value + merged.constant - rest;

  out.epsilon_bar = epsilon_bar;
  if (epsilon_bar) out.bound = out.merged_vcg_utility + *epsilon_bar;
  return out;
}

Money UnilateralDeviationBound(const BidProfile& truth, std::size_t a, const BidProfile& bids,
                               Money epsilon_bar, const NetworkGraph& network,
                               const AllocationGrid& grid, const LeastCoreOptions& options) {
  const BidProfile profile = bids.WithTable(a, truth[a]);
  const CoalitionValues values(profile, network, grid);
  const MlcResult mlc = MinMaxLeastCoreUtilities(values, options);
  return epsilon_bar + mlc.vcg_utilities.at(a) - mlc.utilities.at(a);
}

DeviationCheck CheckUnilateralDeviations(const BidProfile& truth, std::size_t a,
                                         const NetworkGraph& network,
                                         const AllocationGrid& grid, std::size_t samples,
                                         std::uint64_t seed, const LeastCoreOptions& options) {
  const BidTable& own = truth[a];
  std::vector<double> def;
  for (std::size_t link : own.links()) def.push_back(grid.default_value(link));
  Money spread = 0.0;
  for (const auto& [x, v] : own.Entries()) spread = std::max(spread, std::abs(v));
  spread = 0.25 * spread + 0.01;

  const CoalitionValues base(truth, network, grid);
  const MlcResult honest = MinMaxLeastCoreUtilities(base, options);

  DeviationCheck check;
  check.samples = samples;
  check.epsilon_bar = honest.epsilon_star;
  std::vector<Money> gains;
  std::mt19937_64 engine(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const double k = UniformDraw(engine, 0.0, 3.0);
    BidTable deviation = own.Transformed([&](const BidTable::Tuple& x,
                                             Money v) -> std::optional<Money> {
      bool is_default = true;
      for (std::size_t p = 0; p < x.size(); ++p) {
        if (std::abs(x[p] - def[p]) > kTolerance) is_default = false;
      }
      if (is_default) return 0.0;
      if (UniformDraw(engine, 0.0, 1.0) < 0.2) return std::nullopt;
      return k * v + UniformDraw(engine, -spread, spread);
    });
    const BidProfile profile = truth.WithTable(a, std::move(deviation));
    const CoalitionValues values(profile, network, grid);
    PaymentReport report = MlcPayments(values, options);
    AttachTrueUtilities(report, truth, network);
    check.epsilon_bar = std::max(check.epsilon_bar, report.epsilon_star.value_or(0.0));
    gains.push_back(*report.areas[a].true_utility - honest.utilities[a]);
  }
  check.bound = check.epsilon_bar + honest.vcg_utilities[a] - honest.utilities[a];
  for (Money g : gains) {
    check.max_gain = std::max(check.max_gain, g);
    if (g > check.bound + kTolerance) ++check.violations;
  }
  return check;
}

GrovesCertificate GrovesBudgetInfeasibility(const GrovesInstance& instance) {
  const std::size_t n1 = instance.first_strategies.size();
  const std::size_t n2 = instance.second_strategies.size();
  if (n1 == 0 || n2 == 0) throw Error("bad-instance", "each area needs at least one strategy");

  const NetworkGraph network({AreaId{"a1"}, AreaId{"a2"}},
                             {{LinkId{"e1"}, AreaId{"a1"}, AreaId{"a2"}}});
  const AllocationGrid grid = AllocationGrid::Uniform(1, {0.0, 1.0}, 0.0);
  auto table = [&](std::size_t area, Money at_one) {
    const std::vector<std::pair<BidTable::Tuple, Money>> entries = {{{0.0}, 0.0},
                                                                    {{1.0}, at_one}};
    return BidTable::FromEntries(network.area(area), {0}, grid, entries);
  };

  GrovesCertificate cert;
  const std::size_t unknowns = n2 + n1;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const BidProfile profile({table(0, instance.first_strategies[i]),
                                table(1, instance.second_strategies[j])});
      const ClearingResult clearing = ClearMarket(profile, network, grid);
      // Σ_a p_a = Σ_a (h_a - Σ_{b≠a} b_b(χ*)) = 0.
      std::vector<double> row(unknowns, 0.0);
      row[j] = 1.0;
      row[n2 + i] = 1.0;
      double rhs = 0.0;
      for (std::size_t a = 0; a < 2; ++a) rhs += clearing.value - *clearing.area_values[a];
      cert.matrix.push_back(std::move(row));
      cert.rhs.push_back(rhs);
      cert.profiles.emplace_back(i, j);
    }
  }

  const auto rows = static_cast<Eigen::Index>(cert.matrix.size());
  const auto cols = static_cast<Eigen::Index>(unknowns);
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) a(r, c) = cert.matrix[r][c];
    b(r) = cert.rhs[r];
  }
  Eigen::MatrixXd augmented(rows, cols + 1);
  augmented << a, b;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-9);
  Eigen::FullPivLU<Eigen::MatrixXd> lu_aug(augmented);
  lu_aug.setThreshold(1e-9);
  cert.rank = static_cast<std::size_t>(lu.rank());
  cert.augmented_rank = static_cast<std::size_t>(lu_aug.rank());
  const Eigen::VectorXd h = a.completeOrthogonalDecomposition().solve(b);
  cert.residual = (a * h - b).norm();
  return cert;
}

}  // namespace rxmarket
