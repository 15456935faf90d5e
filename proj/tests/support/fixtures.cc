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


#include "fixtures.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rxmarket::testing {

NetworkGraph Triangle() {
  return NetworkGraph({AreaId{"a1"}, AreaId{"a2"}, AreaId{"a3"}},
                      {{LinkId{"e1"}, AreaId{"a1"}, AreaId{"a2"}},
                       {LinkId{"e2"}, AreaId{"a2"}, AreaId{"a3"}},
                       {LinkId{"e3"}, AreaId{"a3"}, AreaId{"a1"}}});
}

AllocationGrid CaseStudyGrid(std::size_t num_links) {
  return AllocationGrid::Uniform(num_links, {0.0, 0.1, 0.2, 0.3, 0.4}, 0.0);
}

std::vector<QuadraticCoefficients> CaseStudyCoefficients() {
  return {{{1.888, 1.120}, {-5.533}}, {{2.262, 1.710}, {-5.012}}, {{1.448, 2.305}, {-6.580}}};
}

Instance CaseStudy() {
  NetworkGraph network = Triangle();
  AllocationGrid grid = CaseStudyGrid();
  std::vector<BidTable> tables;
  const auto coefficients = CaseStudyCoefficients();
  for (std::size_t a = 0; a < 3; ++a) {
    tables.push_back(QuadraticValuation(network, a, grid, coefficients[a]));
  }
  return {std::move(network), std::move(grid), BidProfile(std::move(tables))};
}

NetworkGraph Star(std::size_t spokes) {
  std::vector<AreaId> areas = {AreaId{"h"}};
  std::vector<NetworkGraph::Link> links;
  for (std::size_t i = 1; i <= spokes; ++i) {
    areas.push_back(AreaId{"s" + std::to_string(i)});
    links.push_back({LinkId{"l" + std::to_string(i)}, AreaId{"h"}, areas.back()});
  }
  return NetworkGraph(areas, links);
}

Instance TwoAreas(Money w1, Money w2) {
  NetworkGraph network({AreaId{"a1"}, AreaId{"a2"}}, {{LinkId{"e1"}, AreaId{"a1"}, AreaId{"a2"}}});
  AllocationGrid grid = AllocationGrid::Uniform(1, {0.0, 1.0}, 0.0);
  auto table = [&](std::size_t a, Money w) {
    const std::vector<std::pair<BidTable::Tuple, Money>> entries = {{{0.0}, 0.0}, {{1.0}, w}};
    return BidTable::FromEntries(network.area(a), {0}, grid, entries);
  };
  BidProfile profile({table(0, w1), table(1, w2)});
  return {std::move(network), std::move(grid), std::move(profile)};
}

namespace {

double Draw(std::mt19937_64& rng, double lo, double hi) { return UniformDraw(rng, lo, hi); }

bool IsDefault(const BidTable& t, const AllocationGrid& grid, const BidTable::Tuple& x) {
  for (std::size_t p = 0; p < x.size(); ++p) {
    if (std::abs(x[p] - grid.default_value(t.links()[p])) > 1e-12) return false;
  }
  return true;
}

}  // namespace

BidTable RandomTableLike(const BidTable& like, const AllocationGrid& grid, std::mt19937_64& rng,
                         double drop_probability) {
  return like.Transformed([&](const BidTable::Tuple& x, Money) -> std::optional<Money> {
    if (IsDefault(like, grid, x)) return 0.0;
    if (Draw(rng, 0.0, 1.0) < drop_probability) return std::nullopt;
    return Draw(rng, -1.0, 1.0);
  });
}

Instance RandomInstance(std::uint64_t seed, const RandomOptions& options) {
  std::mt19937_64 rng(seed);
  const std::size_t span = options.max_areas - options.min_areas + 1;
  const std::size_t n = options.min_areas + static_cast<std::size_t>(rng() % span);

  std::vector<AreaId> areas;
  for (std::size_t i = 0; i < n; ++i) areas.push_back(AreaId{"a" + std::to_string(i + 1)});
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (options.force_star) {
    const std::size_t hub = static_cast<std::size_t>(rng() % n);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != hub) edges.emplace_back(std::min(hub, i), std::max(hub, i));
    }
  } else {
    // Random spanning tree, then extra edges up to the cap.
    for (std::size_t i = 1; i < n; ++i) {
      const std::size_t j = static_cast<std::size_t>(rng() % i);
      edges.emplace_back(j, i);
    }
    std::vector<std::pair<std::size_t, std::size_t>> spare;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (std::find(edges.begin(), edges.end(), std::make_pair(i, j)) == edges.end()) {
          spare.emplace_back(i, j);
        }
      }
    }
    std::shuffle(spare.begin(), spare.end(), rng);
    const std::size_t room = options.max_links > edges.size() ? options.max_links - edges.size() : 0;
    const std::size_t extra = std::min<std::size_t>(spare.size(), rng() % (room + 1));
    for (std::size_t k = 0; k < extra; ++k) edges.push_back(spare[k]);
  }
  std::vector<NetworkGraph::Link> links;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    links.push_back({LinkId{"e" + std::to_string(k + 1)}, areas[edges[k].first],
                     areas[edges[k].second]});
  }
  NetworkGraph network(areas, links);

  const double def = rng() % 4 == 0 ? 0.5 : 0.0;
  AllocationGrid grid = AllocationGrid::Uniform(links.size(), {0.0, 0.5, 1.0}, def);

  std::vector<BidTable> tables;
  for (std::size_t a = 0; a < n; ++a) {
    const auto incident = network.IncidentLinks(a);
    if (rng() % 3 == 0) {
      QuadraticCoefficients c;
      for (std::size_t i = 0; i < incident.size(); ++i) c.quadratic.push_back(Draw(rng, 0.0, 3.0));
      for (std::size_t i = 0; i < QuadraticCoefficients::CrossSize(incident.size()); ++i) {
        c.cross.push_back(Draw(rng, -9.0, 0.0));
      }
      tables.push_back(QuadraticValuation(network, a, grid, c));
    } else {
      const BidTable full = BidTable::FromFunction(
          network.area(a), incident, grid,
          [](std::span<const double>) -> std::optional<Money> { return 0.0; });
      tables.push_back(RandomTableLike(full, grid, rng, options.drop_probability));
    }
  }
  return {std::move(network), std::move(grid), BidProfile(std::move(tables))};
}

Money BruteForceValue(const BidProfile& profile, Coalition s, const NetworkGraph& network,
                      const AllocationGrid& grid) {
  const std::size_t m = network.num_links();
  std::vector<std::size_t> digits(m, 0);
  Money best = -1e300;
  bool any = false;
  while (true) {
    bool allowed = true;
    for (std::size_t e = 0; e < m && allowed; ++e) {
      auto [u, v] = network.Endpoints(e);
      const bool internal = s.Contains(u) && s.Contains(v);
      if (!internal && digits[e] != grid.default_index(e)) allowed = false;
    }
    if (allowed) {
      Money total = 0.0;
      bool feasible = true;
      for (std::size_t a : s.Members()) {
        std::vector<double> x;
        for (std::size_t e : profile[a].links()) x.push_back(grid.values(e)[digits[e]]);
        if (!profile[a].Contains(x)) {
          feasible = false;
          break;
        }
        total += profile[a].Evaluate(x);
      }
      if (feasible) {
        best = any ? std::max(best, total) : total;
        any = true;
      }
    }
    std::size_t e = 0;
    while (e < m && ++digits[e] == grid.size(e)) digits[e++] = 0;
    if (e == m) break;
  }
  return any ? best : 0.0;
}

Money ThreePlayerLeastCore(Money v12, Money v13, Money v23, Money v) {
  Money eps = 0.0;
  eps = std::max(eps, (v12 + v13 + v23 - 2.0 * v) / 3.0);
  for (Money pair : {v12, v13, v23}) eps = std::max(eps, (pair - v) / 2.0);
  return eps;
}

Money TrueUtility(const BidTable& truth, const AllocationVector& allocation, Money payment) {
  std::vector<double> x;
  for (std::size_t e : truth.links()) x.push_back(allocation[e]);
  return truth.Evaluate(x) - payment;
}

}  // namespace rxmarket::testing
