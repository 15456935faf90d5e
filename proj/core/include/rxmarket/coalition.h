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


// Coalitional game induced by a bid profile: ε-core membership, the least
// core and its min-max selection, and the equivalent upper-bound system.

#ifndef RXMARKET_COALITION_H_
#define RXMARKET_COALITION_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "rxmarket/allocation.h"
#include "rxmarket/bids.h"
#include "rxmarket/common.h"
#include "rxmarket/network.h"

namespace rxmarket {

// Revealed utilities ū, one entry per area in canonical order.
using PayoffVector = std::vector<Money>;

// Memoized V(B_S) for one profile. The referenced objects must outlive it.
// Lookups are safe from several threads.
class CoalitionValues {
 public:
  CoalitionValues(const BidProfile& profile, const NetworkGraph& network,
                  const AllocationGrid& grid);
  CoalitionValues(BidProfile&&, const NetworkGraph&, const AllocationGrid&) = delete;
  CoalitionValues(const BidProfile&, NetworkGraph&&, const AllocationGrid&) = delete;
  CoalitionValues(const BidProfile&, const NetworkGraph&, AllocationGrid&&) = delete;

  Money operator()(Coalition s) const;
  Money Grand() const { return grand_.value; }
  const ClearingResult& GrandClearing() const { return grand_; }

  // Fills the cache for all 2^|A| coalitions.
  void PrecomputeAll() const;

  std::size_t num_areas() const { return network_.num_areas(); }
  const BidProfile& profile() const { return profile_; }
  const NetworkGraph& network() const { return network_; }
  const AllocationGrid& grid() const { return grid_; }

 private:
  const BidProfile& profile_;
  const NetworkGraph& network_;
  const AllocationGrid& grid_;
  ClearingResult grand_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, Money> cache_;
};

struct CoalitionViolation {
  Coalition coalition;
  // V(B_S) - eps - Σ_{a∈S} ū_a
  Money amount = 0.0;
};

struct CoreCheck {
  bool contained = false;
  // Σ ū_a - V(B)
  Money budget_gap = 0.0;
  std::vector<CoalitionViolation> violated;
};

// ū ∈ K_Core(B, eps): Σ ū = V(B) and Σ_{a∈S} ū_a >= V(B_S) - eps for every
// proper subset S, both within `tolerance`. Throws "negative-epsilon".
CoreCheck EpsilonCoreContains(const CoalitionValues& values, const PayoffVector& u,
                              Money eps, double tolerance = kTolerance);

// Most violated coalition constraint (first in mask order on ties), or
// nullopt when no violation exceeds `tolerance`.
std::optional<CoalitionViolation> SeparationOracle(const CoalitionValues& values,
                                                   const PayoffVector& u, Money eps,
                                                   double tolerance = kTolerance);

enum class MlcSelection {
  // Among min-max optima, the one closest to ū^VCG in Euclidean norm.
  kMinDistance,
  // Whatever vertex the simplex stops at.
  kVertex,
};

const char* MlcSelectionName(MlcSelection selection);

struct LeastCoreOptions {
  double tolerance = kTolerance;
  std::size_t max_rounds = 256;
  // Full-enumeration fallback is allowed up to this many areas.
  std::size_t enumeration_limit = 12;
  MlcSelection selection = MlcSelection::kMinDistance;
};

struct LeastCoreResult {
  Money epsilon_star = 0.0;
  PayoffVector witness;
  // Coalitions whose constraint is tight at the witness.
  std::vector<Coalition> binding;
  // Separation rounds until no violated coalition remained.
  std::size_t iterations = 0;
  bool used_full_enumeration = false;
  // Coalition constraints present in the final program.
  std::vector<Coalition> cuts;
};

// ε*(B) by constraint generation.
LeastCoreResult LeastCoreEpsilon(const CoalitionValues& values,
                                 const LeastCoreOptions& options = {});

// ε*(B) from one program with every coalition constraint written out.
LeastCoreResult LeastCoreEpsilonFull(const CoalitionValues& values,
                                     const LeastCoreOptions& options = {});

// ū^VCG_a = V(B) - V(B_{-a}).
PayoffVector VcgUtilities(const CoalitionValues& values);

struct MlcResult {
  PayoffVector utilities;
  PayoffVector vcg_utilities;
  Money epsilon_star = 0.0;
  // max_a (ū_a - ū^VCG_a) at the optimum.
  Money max_gap = 0.0;
  MlcSelection selection = MlcSelection::kMinDistance;
  LeastCoreResult least_core;
  std::size_t iterations = 0;
};

// Least-core point minimizing max_a (ū_a - ū^VCG_a), with the deterministic
// tie-break named by options.selection.
MlcResult MinMaxLeastCoreUtilities(const CoalitionValues& values,
                                   const LeastCoreOptions& options = {});

struct UpperBound {
  Coalition coalition;
  // V(B) - V(B_{-S}) + eps
  Money bound = 0.0;
};

// The upper-bound form of the ε-core, one entry per subset S ⊆ A (mask
// order, the empty set first).
std::vector<UpperBound> UpperBoundSystem(const CoalitionValues& values, Money eps);

// Σ ū = V(B) and Σ_{a∈S} ū_a <= bound(S) for every S, within `tolerance`.
bool SatisfiesUpperBoundSystem(const CoalitionValues& values, const PayoffVector& u, Money eps,
                               double tolerance = kTolerance);

// Hub receives V(B), every spoke 0. Throws Error("not-a-star").
PayoffVector StarCoreWitness(const CoalitionValues& values);

}  // namespace rxmarket

#endif  // RXMARKET_COALITION_H_
