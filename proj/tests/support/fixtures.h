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


// Instances shared by the unit, property and acceptance tests, plus
// brute-force reference computations that do not go through the library's
// solvers.

#ifndef RXMARKET_TESTS_SUPPORT_FIXTURES_H_
#define RXMARKET_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rxmarket/bids.h"
#include "rxmarket/coalition.h"
#include "rxmarket/network.h"

namespace rxmarket::testing {

struct Instance {
  NetworkGraph network;
  AllocationGrid grid;
  BidProfile profile;
};

// Triangle e1=(a1,a2), e2=(a2,a3), e3=(a3,a1) on {0,...,0.4}.
NetworkGraph Triangle();
AllocationGrid CaseStudyGrid(std::size_t num_links = 3);
std::vector<QuadraticCoefficients> CaseStudyCoefficients();
Instance CaseStudy();

// Hub "h" with spokes "s1".."s{spokes}".
NetworkGraph Star(std::size_t spokes);

// Single link a1-a2 with choices {0,1}; b_1(1) = w1, b_2(1) = w2.
Instance TwoAreas(Money w1, Money w2);

struct RandomOptions {
  std::size_t min_areas = 2;
  std::size_t max_areas = 4;
  std::size_t max_links = 5;
  bool force_star = false;
  // Probability of dropping a non-default tuple from a table.
  double drop_probability = 0.15;
};

// Connected random graph, a 3-point grid (sometimes with an interior
// default) and random tables. Deterministic in `seed`.
Instance RandomInstance(std::uint64_t seed, const RandomOptions& options = {});

// A random table over the area's incident links whose domain is a subset
// of `like`'s domain (and contains the default).
BidTable RandomTableLike(const BidTable& like, const AllocationGrid& grid, std::mt19937_64& rng,
                         double drop_probability);

// ---------------------------------------------------------------------------
// Brute-force references.

// max Σ_{a∈s} b_a over every allocation vector in the grid product with the
// links outside E^s at default, checking domains via Evaluate/Contains.
Money BruteForceValue(const BidProfile& profile, Coalition s, const NetworkGraph& network,
                      const AllocationGrid& grid);

// ε* = max(0, (V12 + V13 + V23 - 2V) / 3) for three players whose pair
// values dominate singletons (singletons are 0).
Money ThreePlayerLeastCore(Money v12, Money v13, Money v23, Money v);

// True utility of `area` under a report, from the true table.
Money TrueUtility(const BidTable& truth, const AllocationVector& allocation, Money payment);

}  // namespace rxmarket::testing

#endif  // RXMARKET_TESTS_SUPPORT_FIXTURES_H_
