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

// Gridded allocation choices and tabulated bids.
//
// A bid (or a true valuation; the representation is the same) maps each
// tuple of capacity fractions on the area's incident links to money. Only
// tuples present in the table are feasible for that area, and the all-default
// tuple is always present with value exactly 0.

#ifndef RXMARKET_BIDS_H_
#define RXMARKET_BIDS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rxmarket/common.h"
#include "rxmarket/network.h"

namespace rxmarket {

// χ in canonical link order.
using AllocationVector = std::vector<double>;

struct GridViolation {
  // "grid-empty", "grid-out-of-range", "grid-not-ascending",
  // "default-off-grid", "grid-link-count".
  std::string code;
  std::string detail;
};

// Permitted capacity fractions per link plus the default allocation χ′.
// The product of the per-link lists is the regulatory set of feasible χ.
class AllocationGrid {
 public:
  struct Axis {
    std::vector<double> values;
    double default_value = 0.0;
  };

  explicit AllocationGrid(std::vector<Axis> axes);
  static AllocationGrid Uniform(std::size_t num_links, std::vector<double> values,
                                double default_value);

  std::vector<GridViolation> Validate() const;
  std::vector<GridViolation> Validate(const NetworkGraph& network) const;

  std::size_t num_links() const { return axes_.size(); }
  const Axis& axis(std::size_t link) const { return axes_.at(link); }
  const std::vector<double>& values(std::size_t link) const { return axes_.at(link).values; }
  std::size_t size(std::size_t link) const { return axes_.at(link).values.size(); }
  double default_value(std::size_t link) const { return axes_.at(link).default_value; }
  std::size_t default_index(std::size_t link) const { return default_index_.at(link); }

  // Index of `x` on the link's list, matched within kTolerance.
  std::optional<std::size_t> IndexOf(std::size_t link, double x) const;

  std::vector<std::size_t> DefaultIndices() const { return default_index_; }
  AllocationVector DefaultAllocation() const;
  AllocationVector ToAllocation(std::span<const std::size_t> grid_index) const;

  // True when every link shares one value list and one default.
  bool IsUniform() const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> default_index_;
};

// Tabulated bid b_a over the grid product of the area's domain links.
class BidTable {
 public:
  using Tuple = std::vector<double>;
  // Returns nullopt for tuples outside the feasible set.
  using ValueFn = std::function<std::optional<Money>(std::span<const double>)>;

  // Throws Error with code "dimension-mismatch", "off-grid",
  // "duplicate-entry", "default-missing" or "default-not-zero".
  static BidTable FromEntries(AreaId area, std::vector<std::size_t> links,
                              const AllocationGrid& grid,
                              std::span<const std::pair<Tuple, Money>> entries);

  // Tabulates `fn` over the full grid product; same invariant checks.
  static BidTable FromFunction(AreaId area, std::vector<std::size_t> links,
                               const AllocationGrid& grid, const ValueFn& fn);

  const AreaId& area() const { return area_; }
  // Domain link indices (into the network), canonical order.
  const std::vector<std::size_t>& links() const { return links_; }
  std::size_t arity() const { return links_.size(); }

  // Exact lookup; throws Error("tuple-not-in-domain").
  Money Evaluate(std::span<const double> tuple) const;
  bool Contains(std::span<const double> tuple) const;

  // Lookup by per-link grid indices. `link_grid_index` is indexed by network
  // link, so one vector serves every table in a market.
  std::size_t FlatIndex(std::span<const std::size_t> link_grid_index) const;
  std::optional<Money> At(std::size_t flat) const {
    if (!present_[flat]) return std::nullopt;
    return values_[flat];
  }

  std::size_t num_points() const { return values_.size(); }
  std::size_t num_entries() const;
  Tuple TupleAt(std::size_t flat) const;
  std::vector<std::pair<Tuple, Money>> Entries() const;

  // Every value multiplied by k. Requires k >= 0.
  BidTable Scaled(double k) const;

  // Rebuilds the table through `fn(tuple, value)`; dropping an entry
  // (returning nullopt) shrinks the feasible set. The default entry is
  // re-checked.
  BidTable Transformed(
      const std::function<std::optional<Money>(const Tuple&, Money)>& fn) const;

  BidTable Relabeled(AreaId area) const;

  friend bool operator==(const BidTable&, const BidTable&) = default;

 private:
  BidTable() = default;
  void Finalize();

  AreaId area_;
  std::vector<std::size_t> links_;
  std::vector<std::vector<double>> axes_;
  std::vector<std::size_t> default_digits_;
  std::vector<std::size_t> strides_;
  std::vector<Money> values_;
  std::vector<char> present_;
};

// One table per area, indexed by canonical area index.
class BidProfile {
 public:
  BidProfile() = default;
  explicit BidProfile(std::vector<BidTable> tables) : tables_(std::move(tables)) {}

  // Violations use codes "missing-area", "area-mismatch",
  // "non-incident-link", "domain-mismatch".
  std::vector<GridViolation> Validate(const NetworkGraph& network) const;

  std::size_t size() const { return tables_.size(); }
  const BidTable& operator[](std::size_t area) const { return tables_.at(area); }
  const std::vector<BidTable>& tables() const { return tables_; }

  BidProfile WithTable(std::size_t area, BidTable table) const;

  friend bool operator==(const BidProfile&, const BidProfile&) = default;

 private:
  std::vector<BidTable> tables_;
};

// Weights of the quadratic valuation family
//   v(χ) = Σ_i q_i (χ_i − χ_i²) + Σ_{i<j} c_ij χ_i χ_j
// over the area's incident links in canonical order; cross weights follow
// canonical pair order (0,1), (0,2), ..., (1,2), ...
struct QuadraticCoefficients {
  std::vector<double> quadratic;
  std::vector<double> cross;

  // Flat layout [q_0..q_{k-1}, c_01, c_02, ...]; throws "dimension-mismatch".
  static QuadraticCoefficients FromFlat(std::span<const double> flat,
                                        std::size_t num_links);
  std::vector<double> Flat() const;
  std::size_t num_links() const { return quadratic.size(); }
  static std::size_t CrossSize(std::size_t num_links) {
    return num_links < 2 ? 0 : num_links * (num_links - 1) / 2;
  }
  static std::size_t FlatSize(std::size_t num_links) {
    return num_links + CrossSize(num_links);
  }
};

// Evaluates the quadratic form at a tuple (no normalization).
Money EvaluateQuadratic(const QuadraticCoefficients& c, std::span<const double> x);

// Quadratic valuation tabulated over the full grid product of the area's
// incident links, shifted so that the default tuple maps to 0.
BidTable QuadraticValuation(const NetworkGraph& network, std::size_t area,
                            const AllocationGrid& grid,
                            const QuadraticCoefficients& coefficients);

struct CoefficientRanges {
  double quadratic_lo = 0.0;
  double quadratic_hi = 3.0;
  double cross_lo = -9.0;
  double cross_hi = 0.0;

  friend bool operator==(const CoefficientRanges&, const CoefficientRanges&) = default;
};

inline constexpr char kGeneratorName[] = "mt19937_64";

// Uniform draw on [lo, hi) from the top 53 bits of one engine output, so the
// stream is identical on every standard library.
double UniformDraw(std::mt19937_64& engine, double lo, double hi);

// Draws coefficients area by area (canonical order): quadratic weights in
// canonical link order, then cross weights in canonical pair order.
std::vector<QuadraticCoefficients> SampleCoefficients(const NetworkGraph& network,
                                                      const CoefficientRanges& ranges,
                                                      std::mt19937_64& engine);

BidProfile SampleValuationProfile(const NetworkGraph& network, const AllocationGrid& grid,
                                  const CoefficientRanges& ranges, std::uint64_t seed);

BidTable ScaleBid(const BidTable& table, double k);

struct MergedBid {
  BidTable table;     // domain = boundary links of the coalition
  Money constant;     // merged value at the default boundary tuple, removed
};

// Bid of the coalition acting as one pseudo-area: for every boundary tuple,
// the best joint value over internal-link tuples feasible for every member,
// normalized to 0 at the default boundary tuple. Boundary tuples with no
// feasible internal completion are left out of the domain.
MergedBid MergeBids(const BidProfile& profile, Coalition s, const NetworkGraph& network,
                    const AllocationGrid& grid);

}  // namespace rxmarket

#endif  // RXMARKET_BIDS_H_
