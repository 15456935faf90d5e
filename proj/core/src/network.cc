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

#include "rxmarket/network.h"

#include <algorithm>
#include <set>
#include <utility>

namespace rxmarket {

std::vector<std::size_t> Coalition::Members() const {
  std::vector<std::size_t> members;
  members.reserve(size());
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    members.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return members;
}

NetworkGraph::NetworkGraph(std::vector<AreaId> areas, std::vector<Link> links)
    : areas_(std::move(areas)), links_(std::move(links)) {
  for (std::size_t i = 0; i < areas_.size(); ++i) {
    area_index_.emplace(areas_[i], i);  // first declaration wins
  }
  for (std::size_t k = 0; k < links_.size(); ++k) {
    link_index_.emplace(links_[k].id, k);
  }
  endpoints_.reserve(links_.size());
  for (const Link& link : links_) {
    auto lookup = [&](const AreaId& id) {
      auto it = area_index_.find(id);
      return it == area_index_.end() ? kUndeclared : it->second;
    };
    endpoints_.emplace_back(lookup(link.first), lookup(link.second));
  }
}

std::vector<NetworkViolation> NetworkGraph::Validate() const {
  std::vector<NetworkViolation> out;
  if (areas_.empty()) {
    out.push_back({"no-areas", "network declares no areas"});
    return out;
  }
  if (areas_.size() > Coalition::kMaxAreas) {
    out.push_back({"too-many-areas",
                   "at most " + std::to_string(Coalition::kMaxAreas) +
                       " areas are supported"});
  }

  std::set<AreaId> seen_areas;
  for (const AreaId& a : areas_) {
    if (a.name.empty()) out.push_back({"empty-id", "area with empty name"});
    if (!seen_areas.insert(a).second) {
      out.push_back({"duplicate-area", "area '" + a.name + "' declared twice"});
    }
  }

  std::set<LinkId> seen_links;
  std::set<std::pair<std::size_t, std::size_t>> seen_pairs;
  bool endpoints_ok = true;
  for (std::size_t k = 0; k < links_.size(); ++k) {
    const Link& link = links_[k];
    if (link.id.name.empty()) out.push_back({"empty-id", "link with empty name"});
    if (!seen_links.insert(link.id).second) {
      out.push_back({"duplicate-link", "link '" + link.id.name + "' declared twice"});
    }
    auto [u, v] = endpoints_[k];
    if (u == kUndeclared || v == kUndeclared) {
      endpoints_ok = false;
      out.push_back({"undeclared-endpoint",
                     "link '" + link.id.name + "' joins '" + link.first.name +
                         "' and '" + link.second.name +
                         "', which are not both declared areas"});
      continue;
    }
    if (u == v) {
      out.push_back({"self-loop", "link '" + link.id.name + "' joins area '" +
                                      link.first.name + "' to itself"});
      continue;
    }
    if (!seen_pairs.insert(std::minmax(u, v)).second) {
      out.push_back({"parallel-link", "link '" + link.id.name +
                                          "' duplicates another link between '" +
                                          link.first.name + "' and '" +
                                          link.second.name + "'"});
    }
  }

  if (endpoints_ok) {
    // Undirected reachability from area 0.
    std::vector<std::vector<std::size_t>> adjacency(areas_.size());
    for (auto [u, v] : endpoints_) {
      adjacency[u].push_back(v);
      adjacency[v].push_back(u);
    }
    std::vector<bool> reached(areas_.size(), false);
    std::vector<std::size_t> stack = {0};
    reached[0] = true;
    while (!stack.empty()) {
      std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b : adjacency[a]) {
        if (!reached[b]) {
          reached[b] = true;
          stack.push_back(b);
        }
      }
    }
    std::vector<std::string> unreached;
    for (std::size_t i = 0; i < areas_.size(); ++i) {
      if (!reached[i]) unreached.push_back(areas_[i].name);
    }
    if (!unreached.empty()) {
      std::string names;
      for (const auto& n : unreached) names += (names.empty() ? "" : ",") + n;
      out.push_back({"disconnected", "areas {" + names + "} are not reachable from '" +
                                         areas_[0].name + "'"});
    }
  }
  return out;
}

std::optional<std::size_t> NetworkGraph::FindArea(const AreaId& id) const {
  auto it = area_index_.find(id);
  if (it == area_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> NetworkGraph::FindLink(const LinkId& id) const {
  auto it = link_index_.find(id);
  if (it == link_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t NetworkGraph::AreaIndex(const AreaId& id) const {
  if (auto i = FindArea(id)) return *i;
  throw Error("unknown-area", "unknown area '" + id.name + "'");
}

std::size_t NetworkGraph::LinkIndex(const LinkId& id) const {
  if (auto i = FindLink(id)) return *i;
  throw Error("unknown-link", "unknown link '" + id.name + "'");
}

std::pair<std::size_t, std::size_t> NetworkGraph::Endpoints(std::size_t link) const {
  return endpoints_.at(link);
}

std::vector<std::size_t> NetworkGraph::IncidentLinks(std::size_t area) const {
  if (area >= areas_.size()) {
    throw Error("unknown-area", "area index " + std::to_string(area) + " out of range");
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < endpoints_.size(); ++k) {
    if (endpoints_[k].first == area || endpoints_[k].second == area) out.push_back(k);
  }
  return out;
}

std::vector<std::size_t> NetworkGraph::BoundaryLinks(Coalition s) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < endpoints_.size(); ++k) {
    if (s.Contains(endpoints_[k].first) != s.Contains(endpoints_[k].second)) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<std::size_t> NetworkGraph::InternalLinks(Coalition r) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < endpoints_.size(); ++k) {
    if (r.Contains(endpoints_[k].first) && r.Contains(endpoints_[k].second)) {
      out.push_back(k);
    }
  }
  return out;
}

std::vector<LinkId> NetworkGraph::IncidentLinks(const AreaId& area) const {
  return LinkIds(IncidentLinks(AreaIndex(area)));
}

std::vector<LinkId> NetworkGraph::BoundaryLinks(std::span<const AreaId> s) const {
  return LinkIds(BoundaryLinks(ToCoalition(s)));
}

std::vector<LinkId> NetworkGraph::InternalLinks(std::span<const AreaId> r) const {
  return LinkIds(InternalLinks(ToCoalition(r)));
}

std::optional<std::size_t> NetworkGraph::StarCenter() const {
  if (areas_.size() < 2 || links_.size() + 1 != areas_.size()) return std::nullopt;
  for (std::size_t a = 0; a < areas_.size(); ++a) {
    bool hub = std::all_of(endpoints_.begin(), endpoints_.end(), [a](const auto& e) {
      return e.first == a || e.second == a;
    });
    if (hub) return a;
  }
  return std::nullopt;
}

Coalition NetworkGraph::ToCoalition(std::span<const AreaId> ids) const {
  Coalition s;
  for (const AreaId& id : ids) s = s.With(AreaIndex(id));
  return s;
}

std::vector<LinkId> NetworkGraph::LinkIds(std::span<const std::size_t> links) const {
  std::vector<LinkId> out;
  out.reserve(links.size());
  for (std::size_t k : links) out.push_back(links_.at(k).id);
  return out;
}

std::string NetworkGraph::Describe(Coalition s) const {
  std::string out = "{";
  bool first = true;
  for (std::size_t i : s.Members()) {
    if (!first) out += ",";
    out += i < areas_.size() ? areas_[i].name : "#" + std::to_string(i);
    first = false;
  }
  return out + "}";
}

}  // namespace rxmarket
