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


// Experiments and certificates built on the payment rules: Monte-Carlo
// estimates of ε̄, coalition manipulation, unilateral deviation bounds and
// the budget-balance obstruction for Groves payments.

#ifndef RXMARKET_ANALYSIS_H_
#define RXMARKET_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rxmarket/bids.h"
#include "rxmarket/coalition.h"
#include "rxmarket/lp.h"
#include "rxmarket/network.h"
#include "rxmarket/payments.h"

namespace rxmarket {

// Builds the profile for Monte-Carlo sample `seed`.
using ProfileSampler = std::function<BidProfile(std::uint64_t seed)>;

struct EpsilonBarOptions {
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  CoefficientRanges ranges;
  // Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 1;
  std::vector<double> quantile_levels = {0.5, 0.9, 0.99, 0.999};
  LeastCoreOptions least_core;
};

struct EpsilonBarEstimate {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string generator = kGeneratorName;
  CoefficientRanges ranges;
  // ε̄: the largest ε* observed, and the sample it came from.
  Money max = 0.0;
  std::size_t argmax = 0;
  Money mean = 0.0;
  // (level, value), linear interpolation between order statistics.
  std::vector<std::pair<double, Money>> quantiles;
};

// ε* over `samples` quadratic profiles drawn with seeds seed, seed+1, ...
// The result does not depend on the thread count.
EpsilonBarEstimate EstimateEpsilonBar(const NetworkGraph& network, const AllocationGrid& grid,
                                      const EpsilonBarOptions& options);

// Same, with a caller-supplied sampler in place of the quadratic family.
EpsilonBarEstimate EstimateEpsilonBar(const NetworkGraph& network, const AllocationGrid& grid,
                                      const ProfileSampler& sampler,
                                      const EpsilonBarOptions& options);

// Maps a member's true table to the table it submits.
using BidTransform = std::function<BidTable(std::size_t area, const BidTable& truth)>;

BidTransform ScaleTransform(double k);

struct MechanismOutcome {
  Mechanism mechanism = Mechanism::kVcg;
  // Σ_{a∈S} u_a measured with true valuations.
  Money truthful_total = 0.0;
  Money manipulated_total = 0.0;
  Money gain() const { return manipulated_total - truthful_total; }
};

struct ManipulationOutcome {
  Coalition coalition;
  std::string strategy;
  MechanismOutcome vcg;
  MechanismOutcome mlc;
  Money epsilon_star_truthful = 0.0;
  Money epsilon_star_manipulated = 0.0;
  // VCG utility of S bidding truthfully as one merged area,
  // V(V_S ∪ B_{-S}) - V(B_{-S}), including the merged constant.
  Money merged_vcg_utility = 0.0;
  std::optional<Money> epsilon_bar;
  // merged_vcg_utility + ε̄, when ε̄ is known.
  std::optional<Money> bound;
};

// Runs VCG and MLC with S truthful and with S submitting transform(v_a).
// Throws Error("bad-coalition") unless S is a nonempty proper subset.
ManipulationOutcome GroupManipulationExperiment(const BidProfile& truth, Coalition s,
                                                const BidTransform& transform,
                                                std::string strategy,
                                                const NetworkGraph& network,
                                                const AllocationGrid& grid,
                                                std::optional<Money> epsilon_bar = std::nullopt,
                                                const LeastCoreOptions& options = {});

// ε̄ + u^VCG_a(V_a ∪ B_{-a}) - u^MLC_a(V_a ∪ B_{-a}): the most area `a` can
// gain under MLC by deviating from v_a while the others bid `bids`.
// `bids[a]` is ignored.
Money UnilateralDeviationBound(const BidProfile& truth, std::size_t a, const BidProfile& bids,
                               Money epsilon_bar, const NetworkGraph& network,
                               const AllocationGrid& grid, const LeastCoreOptions& options = {});

struct DeviationCheck {
  std::size_t samples = 0;
  // Largest ε* over the truthful profile and every sampled deviation.
  Money epsilon_bar = 0.0;
  Money bound = 0.0;
  Money max_gain = -kInfinity;
  std::size_t violations = 0;
};

// Samples deviations of area `a` (scaled and perturbed copies of v_a on a
// random subset of its domain) with everyone else truthful, and counts
// gains above the bound + 1e-9.
DeviationCheck CheckUnilateralDeviations(const BidProfile& truth, std::size_t a,
                                         const NetworkGraph& network,
                                         const AllocationGrid& grid, std::size_t samples,
                                         std::uint64_t seed,
                                         const LeastCoreOptions& options = {});

// Two areas joined by one link with choices {0,1} and χ′ = 0; each area
// picks among bids given by their value at χ = 1.
struct GrovesInstance {
  std::vector<Money> first_strategies = {1.0, 0.0};
  std::vector<Money> second_strategies = {-1.0, 0.0};
};

struct GrovesCertificate {
  // One row per strategy profile (i, j); unknowns are
  // [h_1(b_2^1), h_1(b_2^2), ..., h_2(b_1^1), h_2(b_1^2), ...].
  std::vector<std::vector<double>> matrix;
  std::vector<double> rhs;
  std::vector<std::pair<std::size_t, std::size_t>> profiles;
  std::size_t rank = 0;
  std::size_t augmented_rank = 0;
  // min_h ||A h - b||
  double residual = 0.0;
  bool consistent() const { return rank == augmented_rank; }
};

// Linear system that strong budget balance imposes on the Groves pivot
// terms, with its rank certificate.
GrovesCertificate GrovesBudgetInfeasibility(const GrovesInstance& instance = {});

}  // namespace rxmarket

#endif  // RXMARKET_ANALYSIS_H_
