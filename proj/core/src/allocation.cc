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

#include "rxmarket/allocation.h"

#include "odometer.h"

namespace rxmarket {

std::optional<RestrictedOptimum> MaximizeOverLinks(std::span<const BidTable* const> tables,
                                                   std::span<const std::size_t> free_links,
                                                   std::span<const std::size_t> pinned,
                                                   const AllocationGrid& grid) {
  std::vector<std::size_t> radices;
  radices.reserve(free_links.size());
  for (std::size_t link : free_links) {
    if (grid.size(link) == 0) return std::nullopt;
    radices.push_back(grid.size(link));
  }

  std::vector<std::size_t> index(pinned.begin(), pinned.end());
  std::vector<Money> values(tables.size());
  std::optional<RestrictedOptimum> best;

  // Enumeration runs in lexicographic order, so keeping the incumbent unless
  // a candidate is better by more than the tolerance yields the
  // lexicographically smallest optimum.
  Odometer odo(radices);
  do {
    for (std::size_t p = 0; p < free_links.size(); ++p) index[free_links[p]] = odo.digit(p);
    Money total = 0.0;
    bool feasible = true;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      auto v = tables[t]->At(tables[t]->FlatIndex(index));
      if (!v) {
        feasible = false;
        break;
      }
      values[t] = *v;
      total += *v;
    }
    if (!feasible) continue;
    if (!best || total > best->value + kTolerance) {
      best = RestrictedOptimum{index, total, values};
    }
  } while (odo.Next());
  return best;
}

namespace {

ClearingResult Solve(const BidProfile& profile, Coalition s, const NetworkGraph& network,
                     const AllocationGrid& grid) {
  if (profile.size() != network.num_areas()) {
    throw Error("profile-mismatch", "profile has " + std::to_string(profile.size()) +
                                        " tables, network has " +
                                        std::to_string(network.num_areas()) + " areas");
  }
  std::vector<const BidTable*> tables;
  const auto members = s.Members();
  for (std::size_t a : members) {
    if (a >= profile.size()) throw Error("unknown-area", "coalition member out of range");
    tables.push_back(&profile[a]);
  }
  const auto free_links = network.InternalLinks(s);
  const auto pinned = grid.DefaultIndices();

  auto best = MaximizeOverLinks(tables, free_links, pinned, grid);
  if (!best) {
    throw Error("no-feasible-allocation",
                "no feasible allocation for " + network.Describe(s));
  }
  ClearingResult result;
  result.grid_index = std::move(best->grid_index);
  result.allocation = grid.ToAllocation(result.grid_index);
  result.value = best->value;
  result.area_values.assign(network.num_areas(), std::nullopt);
  for (std::size_t i = 0; i < members.size(); ++i) {
    result.area_values[members[i]] = best->table_values[i];
  }
  result.participants = s;
  return result;
}

}  // namespace

ClearingResult ClearMarket(const BidProfile& profile, const NetworkGraph& network,
                           const AllocationGrid& grid) {
  return Solve(profile, network.AllAreas(), network, grid);
}

ClearingResult CoalitionalValue(const BidProfile& profile, Coalition s,
                                const NetworkGraph& network, const AllocationGrid& grid) {
  return Solve(profile, s, network, grid);
}

}  // namespace rxmarket
