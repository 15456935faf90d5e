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

// Efficient allocation by exhaustive enumeration of the grid.
//
// Ties (|Δ| <= kTolerance) go to the lexicographically smallest allocation
// vector in canonical link order.

#ifndef RXMARKET_ALLOCATION_H_
#define RXMARKET_ALLOCATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rxmarket/bids.h"
#include "rxmarket/common.h"
#include "rxmarket/network.h"

namespace rxmarket {

struct ClearingResult {
  AllocationVector allocation;
  std::vector<std::size_t> grid_index;
  Money value = 0.0;
  // b_a(χ*) for participating areas, nullopt otherwise.
  std::vector<std::optional<Money>> area_values;
  Coalition participants;
};

struct RestrictedOptimum {
  std::vector<std::size_t> grid_index;  // indexed by network link
  Money value = 0.0;
  std::vector<Money> table_values;      // parallel to the `tables` argument
};

// Maximizes the sum of `tables` over grid tuples where only `free_links`
// vary and every other link stays at `pinned` (grid indices, one per link).
// A tuple is feasible when every table contains its projection. Returns
// nullopt when nothing is feasible.
std::optional<RestrictedOptimum> MaximizeOverLinks(std::span<const BidTable* const> tables,
                                                   std::span<const std::size_t> free_links,
                                                   std::span<const std::size_t> pinned,
                                                   const AllocationGrid& grid);

// V(B) and χ*(B). Throws Error("no-feasible-allocation").
ClearingResult ClearMarket(const BidProfile& profile, const NetworkGraph& network,
                           const AllocationGrid& grid);

// V(B_S): members of `s` adjust only links internal to `s`; every other link
// is pinned to its default. V(∅) = 0.
ClearingResult CoalitionalValue(const BidProfile& profile, Coalition s,
                                const NetworkGraph& network, const AllocationGrid& grid);

}  // namespace rxmarket

#endif  // RXMARKET_ALLOCATION_H_
