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

#include "rxmarket/bids.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "odometer.h"
#include "rxmarket/allocation.h"

namespace rxmarket {
namespace {

constexpr std::size_t kNotFound = static_cast<std::size_t>(-1);

std::string FormatTuple(std::span<const double> x) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// AllocationGrid

AllocationGrid::AllocationGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
  default_index_.reserve(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    default_index_.push_back(IndexOf(k, axes_[k].default_value).value_or(kNotFound));
  }
}

AllocationGrid AllocationGrid::Uniform(std::size_t num_links, std::vector<double> values,
                                       double default_value) {
  return AllocationGrid(std::vector<Axis>(num_links, Axis{std::move(values), default_value}));
}

std::vector<GridViolation> AllocationGrid::Validate() const {
  std::vector<GridViolation> out;
  for (std::size_t k = 0; k < axes_.size(); ++k) {
    const Axis& axis = axes_[k];
    const std::string where = "link #" + std::to_string(k);
    if (axis.values.empty()) {
      out.push_back({"grid-empty", where + " has no permitted values"});
      continue;
    }
    for (std::size_t i = 0; i < axis.values.size(); ++i) {
      double x = axis.values[i];
      if (!(x >= 0.0 && x <= 1.0)) {
        out.push_back({"grid-out-of-range", where + " permits " + std::to_string(x) +
                                                ", outside [0,1]"});
      }
      if (i > 0 && !(x > axis.values[i - 1])) {
        out.push_back({"grid-not-ascending", where + " values are not strictly ascending"});
      }
    }
    if (default_index_[k] == kNotFound) {
      out.push_back({"default-off-grid", where + " default " +
                                             std::to_string(axis.default_value) +
                                             " is not a permitted value"});
    }
  }
  return out;
}

std::vector<GridViolation> AllocationGrid::Validate(const NetworkGraph& network) const {
  std::vector<GridViolation> out;
  if (axes_.size() != network.num_links()) {
    out.push_back({"grid-link-count", "grid covers " + std::to_string(axes_.size()) +
                                          " links, network has " +
                                          std::to_string(network.num_links())});
  }
  auto rest = Validate();
  for (auto& v : rest) {
    // Replace "link #k" with the link name when possible.
    auto pos = v.detail.find("link #");
    if (pos == 0) {
      std::size_t k = std::stoul(v.detail.substr(6));
      if (k < network.num_links()) {
        auto end = v.detail.find(' ');
        v.detail = "link '" + network.link(k).name + "'" + v.detail.substr(end);
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<std::size_t> AllocationGrid::IndexOf(std::size_t link, double x) const {
  const auto& values = axes_.at(link).values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i] - x) <= kTolerance) return i;
  }
  return std::nullopt;
}

AllocationVector AllocationGrid::DefaultAllocation() const {
  AllocationVector out;
  out.reserve(axes_.size());
  for (const Axis& a : axes_) out.push_back(a.default_value);
  return out;
}

AllocationVector AllocationGrid::ToAllocation(std::span<const std::size_t> grid_index) const {
  AllocationVector out(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) out[k] = axes_[k].values.at(grid_index[k]);
  return out;
}

bool AllocationGrid::IsUniform() const {
  for (const Axis& a : axes_) {
    if (a.values != axes_.front().values || a.default_value != axes_.front().default_value) {
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// BidTable

void BidTable::Finalize() {
  const std::size_t k = axes_.size();
  strides_.assign(k, 1);
  std::size_t total = 1;
  for (std::size_t p = k; p-- > 0;) {
    strides_[p] = total;
    total *= axes_[p].size();
  }
  values_.assign(total, 0.0);
  present_.assign(total, 0);
}

BidTable BidTable::FromEntries(AreaId area, std::vector<std::size_t> links,
                               const AllocationGrid& grid,
                               std::span<const std::pair<Tuple, Money>> entries) {
  BidTable t;
  t.area_ = std::move(area);
  t.links_ = std::move(links);
  for (std::size_t link : t.links_) {
    t.axes_.push_back(grid.values(link));
    t.default_digits_.push_back(grid.default_index(link));
  }
  t.Finalize();

  for (const auto& [tuple, value] : entries) {
    if (tuple.size() != t.links_.size()) {
      throw Error("dimension-mismatch",
                  "bid of '" + t.area_.name + "' has tuple " + FormatTuple(tuple) +
                      " of size " + std::to_string(tuple.size()) + ", expected " +
                      std::to_string(t.links_.size()));
    }
    std::size_t flat = 0;
    for (std::size_t p = 0; p < tuple.size(); ++p) {
      auto idx = grid.IndexOf(t.links_[p], tuple[p]);
      if (!idx) {
        throw Error("off-grid", "bid of '" + t.area_.name + "' has tuple " +
                                    FormatTuple(tuple) + " off the permitted grid");
      }
      flat += *idx * t.strides_[p];
    }
    if (!std::isfinite(value)) {
      throw Error("non-finite", "bid of '" + t.area_.name + "' has a non-finite value at " +
                                    FormatTuple(tuple));
    }
    if (t.present_[flat]) {
      throw Error("duplicate-entry", "bid of '" + t.area_.name + "' lists tuple " +
                                         FormatTuple(tuple) + " twice");
    }
    t.present_[flat] = 1;
    t.values_[flat] = value;
  }

  std::size_t def = 0;
  for (std::size_t p = 0; p < t.links_.size(); ++p) def += t.default_digits_[p] * t.strides_[p];
  if (!t.present_[def]) {
    throw Error("default-missing",
                "bid of '" + t.area_.name + "' does not contain the default tuple");
  }
  if (std::abs(t.values_[def]) > kTolerance) {
    throw Error("default-not-zero", "bid of '" + t.area_.name + "' is " +
                                        std::to_string(t.values_[def]) +
                                        " at the default tuple; it must be 0");
  }
  t.values_[def] = 0.0;
  return t;
}

BidTable BidTable::FromFunction(AreaId area, std::vector<std::size_t> links,
                                const AllocationGrid& grid, const ValueFn& fn) {
  std::vector<std::size_t> radices;
  for (std::size_t link : links) radices.push_back(grid.size(link));
  std::vector<std::pair<Tuple, Money>> entries;
  Odometer odo(radices);
  Tuple x(links.size());
  do {
    for (std::size_t p = 0; p < links.size(); ++p) x[p] = grid.values(links[p])[odo.digit(p)];
    if (auto v = fn(x)) entries.emplace_back(x, *v);
  } while (odo.Next());
  return FromEntries(std::move(area), std::move(links), grid, entries);
}

Money BidTable::Evaluate(std::span<const double> tuple) const {
  if (tuple.size() == links_.size()) {
    std::size_t flat = 0;
    bool on_grid = true;
    for (std::size_t p = 0; p < tuple.size() && on_grid; ++p) {
      const auto& axis = axes_[p];
      auto it = std::find_if(axis.begin(), axis.end(),
                             [&](double g) { return std::abs(g - tuple[p]) <= kTolerance; });
      if (it == axis.end()) {
        on_grid = false;
      } else {
        flat += static_cast<std::size_t>(it - axis.begin()) * strides_[p];
      }
    }
    if (on_grid && present_[flat]) return values_[flat];
  }
  throw Error("tuple-not-in-domain", "tuple " + FormatTuple(tuple) +
                                         " is not in the feasible set of '" + area_.name +
                                         "'");
}

bool BidTable::Contains(std::span<const double> tuple) const {
  try {
    Evaluate(tuple);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::size_t BidTable::FlatIndex(std::span<const std::size_t> link_grid_index) const {
  std::size_t flat = 0;
  for (std::size_t p = 0; p < links_.size(); ++p) {
    flat += link_grid_index[links_[p]] * strides_[p];
  }
  return flat;
}

std::size_t BidTable::num_entries() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), 1));
}

BidTable::Tuple BidTable::TupleAt(std::size_t flat) const {
  Tuple x(links_.size());
  for (std::size_t p = 0; p < links_.size(); ++p) {
    x[p] = axes_[p][(flat / strides_[p]) % axes_[p].size()];
  }
  return x;
}

std::vector<std::pair<BidTable::Tuple, Money>> BidTable::Entries() const {
  std::vector<std::pair<Tuple, Money>> out;
  for (std::size_t f = 0; f < values_.size(); ++f) {
    if (present_[f]) out.emplace_back(TupleAt(f), values_[f]);
  }
  return out;
}

BidTable BidTable::Scaled(double k) const {
  if (!(k >= 0.0)) throw Error("negative-scale", "scale factor must be nonnegative");
  BidTable t = *this;
  for (std::size_t f = 0; f < t.values_.size(); ++f) {
    if (t.present_[f]) t.values_[f] *= k;
  }
  return t;
}

BidTable BidTable::Transformed(
    const std::function<std::optional<Money>(const Tuple&, Money)>& fn) const {
  BidTable t = *this;
  for (std::size_t f = 0; f < t.values_.size(); ++f) {
    if (!t.present_[f]) continue;
    auto v = fn(TupleAt(f), values_[f]);
    t.present_[f] = v.has_value();
    t.values_[f] = v.value_or(0.0);
  }
  std::size_t def = 0;
  for (std::size_t p = 0; p < links_.size(); ++p) def += default_digits_[p] * strides_[p];
  if (!t.present_[def] || std::abs(t.values_[def]) > kTolerance) {
    throw Error("default-not-zero",
                "transformed bid of '" + area_.name + "' must keep 0 at the default tuple");
  }
  t.values_[def] = 0.0;
  return t;
}

BidTable BidTable::Relabeled(AreaId area) const {
  BidTable t = *this;
  t.area_ = std::move(area);
  return t;
}

BidTable ScaleBid(const BidTable& table, double k) { return table.Scaled(k); }

// ---------------------------------------------------------------------------
// BidProfile

std::vector<GridViolation> BidProfile::Validate(const NetworkGraph& network) const {
  std::vector<GridViolation> out;
  if (tables_.size() != network.num_areas()) {
    out.push_back({"missing-area", "profile has " + std::to_string(tables_.size()) +
                                       " tables for " + std::to_string(network.num_areas()) +
                                       " areas"});
  }
  for (std::size_t a = 0; a < std::min(tables_.size(), network.num_areas()); ++a) {
    const BidTable& t = tables_[a];
    if (t.area() != network.area(a)) {
      out.push_back({"area-mismatch", "table for '" + t.area().name + "' sits at the slot of '" +
                                          network.area(a).name + "'"});
    }
    auto incident = network.IncidentLinks(a);
    for (std::size_t link : t.links()) {
      if (std::find(incident.begin(), incident.end(), link) == incident.end()) {
        out.push_back({"non-incident-link",
                       "bid of '" + t.area().name + "' covers link '" +
                           (link < network.num_links() ? network.link(link).name : "?") +
                           "', which is not incident to it"});
      }
    }
    if (t.links() != incident) {
      out.push_back({"domain-mismatch", "bid of '" + t.area().name +
                                            "' must cover exactly its incident links in "
                                            "canonical order"});
    }
  }
  return out;
}

BidProfile BidProfile::WithTable(std::size_t area, BidTable table) const {
  BidProfile p = *this;
  p.tables_.at(area) = std::move(table);
  return p;
}

// ---------------------------------------------------------------------------
// Quadratic family

QuadraticCoefficients QuadraticCoefficients::FromFlat(std::span<const double> flat,
                                                      std::size_t num_links) {
  if (flat.size() != FlatSize(num_links)) {
    throw Error("dimension-mismatch",
                "expected " + std::to_string(FlatSize(num_links)) + " coefficients for " +
                    std::to_string(num_links) + " incident links, got " +
                    std::to_string(flat.size()));
  }
  QuadraticCoefficients c;
  c.quadratic.assign(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(num_links));
  c.cross.assign(flat.begin() + static_cast<std::ptrdiff_t>(num_links), flat.end());
  return c;
}

std::vector<double> QuadraticCoefficients::Flat() const {
  std::vector<double> out = quadratic;
  out.insert(out.end(), cross.begin(), cross.end());
  return out;
}

Money EvaluateQuadratic(const QuadraticCoefficients& c, std::span<const double> x) {
  const std::size_t k = c.quadratic.size();
  Money v = 0.0;
  for (std::size_t i = 0; i < k; ++i) v += c.quadratic[i] * (x[i] - x[i] * x[i]);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) v += c.cross[idx++] * x[i] * x[j];
  }
  return v;
}

BidTable QuadraticValuation(const NetworkGraph& network, std::size_t area,
                            const AllocationGrid& grid,
                            const QuadraticCoefficients& coefficients) {
  auto links = network.IncidentLinks(area);
  if (coefficients.quadratic.size() != links.size() ||
      coefficients.cross.size() != QuadraticCoefficients::CrossSize(links.size())) {
    throw Error("dimension-mismatch",
                "quadratic coefficients of '" + network.area(area).name + "' do not match its " +
                    std::to_string(links.size()) + " incident links");
  }
  std::vector<double> def;
  for (std::size_t link : links) def.push_back(grid.default_value(link));
  const Money offset = EvaluateQuadratic(coefficients, def);
  return BidTable::FromFunction(network.area(area), links, grid,
                                [&](std::span<const double> x) -> std::optional<Money> {
                                  return EvaluateQuadratic(coefficients, x) - offset;
                                });
}

double UniformDraw(std::mt19937_64& engine, double lo, double hi) {
  const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::vector<QuadraticCoefficients> SampleCoefficients(const NetworkGraph& network,
                                                      const CoefficientRanges& ranges,
                                                      std::mt19937_64& engine) {
  std::vector<QuadraticCoefficients> out;
  out.reserve(network.num_areas());
  for (std::size_t a = 0; a < network.num_areas(); ++a) {
    const std::size_t k = network.IncidentLinks(a).size();
    QuadraticCoefficients c;
    for (std::size_t i = 0; i < k; ++i) {
      c.quadratic.push_back(UniformDraw(engine, ranges.quadratic_lo, ranges.quadratic_hi));
    }
    for (std::size_t i = 0; i < QuadraticCoefficients::CrossSize(k); ++i) {
      c.cross.push_back(UniformDraw(engine, ranges.cross_lo, ranges.cross_hi));
    }
    out.push_back(std::move(c));
  }
  return out;
}

BidProfile SampleValuationProfile(const NetworkGraph& network, const AllocationGrid& grid,
                                  const CoefficientRanges& ranges, std::uint64_t seed) {
  for (std::size_t k = 0; k < grid.num_links(); ++k) {
    if (grid.size(k) == 0) throw Error("grid-empty", "cannot sample over an empty grid");
  }
  std::mt19937_64 engine(seed);
  auto coefficients = SampleCoefficients(network, ranges, engine);
  std::vector<BidTable> tables;
  tables.reserve(coefficients.size());
  for (std::size_t a = 0; a < coefficients.size(); ++a) {
    tables.push_back(QuadraticValuation(network, a, grid, coefficients[a]));
  }
  return BidProfile(std::move(tables));
}

// ---------------------------------------------------------------------------
// Merging

MergedBid MergeBids(const BidProfile& profile, Coalition s, const NetworkGraph& network,
                    const AllocationGrid& grid) {
  if (s.empty()) throw Error("empty-coalition", "cannot merge an empty set of areas");
  const auto boundary = network.BoundaryLinks(s);
  const auto internal = network.InternalLinks(s);

  std::vector<const BidTable*> members;
  std::string label;
  for (std::size_t a : s.Members()) {
    members.push_back(&profile[a]);
    label += (label.empty() ? "" : "+") + network.area(a).name;
  }

  std::vector<std::size_t> radices;
  for (std::size_t link : boundary) radices.push_back(grid.size(link));

  std::vector<std::pair<BidTable::Tuple, Money>> entries;
  std::vector<std::size_t> pinned = grid.DefaultIndices();
  Odometer odo(radices);
  do {
    BidTable::Tuple x(boundary.size());
    for (std::size_t p = 0; p < boundary.size(); ++p) {
      pinned[boundary[p]] = odo.digit(p);
      x[p] = grid.values(boundary[p])[odo.digit(p)];
    }
    auto best = MaximizeOverLinks(members, internal, pinned, grid);
    if (!best) continue;
    entries.emplace_back(std::move(x), best->value);
  } while (odo.Next());

  Money offset = 0.0;
  bool found = false;
  for (const auto& [x, v] : entries) {
    bool is_default = true;
    for (std::size_t p = 0; p < boundary.size(); ++p) {
      if (std::abs(x[p] - grid.default_value(boundary[p])) > kTolerance) is_default = false;
    }
    if (is_default) {
      offset = v;
      found = true;
      break;
    }
  }
  if (!found) {
    throw Error("default-missing", "merged bid of " + network.Describe(s) +
                                       " has no feasible completion at the default");
  }
  for (auto& e : entries) e.second -= offset;
  return MergedBid{BidTable::FromEntries(AreaId{label}, boundary, grid, entries), offset};
}

}  // namespace rxmarket
