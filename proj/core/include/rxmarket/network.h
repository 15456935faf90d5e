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

// Area/tie-line topology and the link-set operators used by the market:
// incident links of an area, links crossing the boundary of an area set, and
// links internal to an area set.

#ifndef RXMARKET_NETWORK_H_
#define RXMARKET_NETWORK_H_

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rxmarket/common.h"

namespace rxmarket {

struct AreaId {
  std::string name;
  friend auto operator<=>(const AreaId&, const AreaId&) = default;
};

struct LinkId {
  std::string name;
  friend auto operator<=>(const LinkId&, const LinkId&) = default;
};

// A set of areas, stored as a bitmask over canonical area indices.
class Coalition {
 public:
  static constexpr std::size_t kMaxAreas = 63;

  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t mask) : mask_(mask) {}

  static constexpr Coalition Singleton(std::size_t area) {
    return Coalition(std::uint64_t{1} << area);
  }
  static constexpr Coalition All(std::size_t num_areas) {
    return Coalition((std::uint64_t{1} << num_areas) - 1);
  }

  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(std::popcount(mask_));
  }
  constexpr bool Contains(std::size_t area) const {
    return (mask_ >> area) & 1U;
  }
  constexpr Coalition With(std::size_t area) const {
    return Coalition(mask_ | (std::uint64_t{1} << area));
  }
  constexpr Coalition Without(std::size_t area) const {
    return Coalition(mask_ & ~(std::uint64_t{1} << area));
  }
  constexpr Coalition ComplementIn(std::size_t num_areas) const {
    return Coalition(All(num_areas).mask_ & ~mask_);
  }
  constexpr bool IsSubsetOf(Coalition other) const {
    return (mask_ & ~other.mask_) == 0;
  }

  // Member indices in ascending (canonical) order.
  std::vector<std::size_t> Members() const;

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t mask_ = 0;
};

struct NetworkViolation {
  // One of: "no-areas", "empty-id", "duplicate-area", "duplicate-link",
  // "undeclared-endpoint", "self-loop", "parallel-link", "disconnected",
  // "too-many-areas".
  std::string code;
  std::string detail;
};

// Undirected simple graph of areas and tie-lines. Areas and links keep their
// declaration order; every set-valued query returns link indices in that
// order. The graph is immutable after construction.
//
// Construction does not validate; call Validate() (the scenario loader does).
// All queries other than Validate() assume a valid graph.
class NetworkGraph {
 public:
  struct Link {
    LinkId id;
    AreaId first;
    AreaId second;
  };

  NetworkGraph(std::vector<AreaId> areas, std::vector<Link> links);

  std::vector<NetworkViolation> Validate() const;
  bool IsValid() const { return Validate().empty(); }

  std::size_t num_areas() const { return areas_.size(); }
  std::size_t num_links() const { return links_.size(); }
  const std::vector<AreaId>& areas() const { return areas_; }
  const std::vector<Link>& links() const { return links_; }
  const AreaId& area(std::size_t index) const { return areas_.at(index); }
  const LinkId& link(std::size_t index) const { return links_.at(index).id; }

  // Throw Error("unknown-area") / Error("unknown-link").
  std::size_t AreaIndex(const AreaId& id) const;
  std::size_t LinkIndex(const LinkId& id) const;
  std::optional<std::size_t> FindArea(const AreaId& id) const;
  std::optional<std::size_t> FindLink(const LinkId& id) const;

  // Endpoint area indices of a link, in declaration order.
  std::pair<std::size_t, std::size_t> Endpoints(std::size_t link) const;

  // E_a: links having `area` as an endpoint.
  std::vector<std::size_t> IncidentLinks(std::size_t area) const;
  // E_S: links with exactly one endpoint in `s`.
  std::vector<std::size_t> BoundaryLinks(Coalition s) const;
  // E^R: links with both endpoints in `r`.
  std::vector<std::size_t> InternalLinks(Coalition r) const;

  // Id-based forms of the three operators above.
  std::vector<LinkId> IncidentLinks(const AreaId& area) const;
  std::vector<LinkId> BoundaryLinks(std::span<const AreaId> s) const;
  std::vector<LinkId> InternalLinks(std::span<const AreaId> r) const;

  // The hub of a star graph, or nullopt. For a single link both endpoints
  // qualify and the first one in canonical order is returned.
  std::optional<std::size_t> StarCenter() const;

  Coalition ToCoalition(std::span<const AreaId> ids) const;
  Coalition AllAreas() const { return Coalition::All(num_areas()); }
  std::vector<LinkId> LinkIds(std::span<const std::size_t> links) const;

  // "{a1,a2}"
  std::string Describe(Coalition s) const;

 private:
  static constexpr std::size_t kUndeclared = static_cast<std::size_t>(-1);

  std::vector<AreaId> areas_;
  std::vector<Link> links_;
  std::vector<std::pair<std::size_t, std::size_t>> endpoints_;
  std::map<AreaId, std::size_t> area_index_;
  std::map<LinkId, std::size_t> link_index_;
};

}  // namespace rxmarket

#endif  // RXMARKET_NETWORK_H_
