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


#include "rxmarket/payments.h"

#include <cmath>

namespace rxmarket {

const char* MechanismName(Mechanism mechanism) {
  switch (mechanism) {
    case Mechanism::kVcg:
      return "VCG";
    case Mechanism::kMlc:
      return "MLC";
    case Mechanism::kCustom:
      return "custom";
  }
  return "?";
}

PayoffVector PaymentReport::Payments() const {
  PayoffVector out;
  for (const auto& a : areas) out.push_back(a.payment);
  return out;
}

PayoffVector PaymentReport::RevealedUtilities() const {
  PayoffVector out;
  for (const auto& a : areas) out.push_back(a.revealed_utility);
  return out;
}

PayoffVector PaymentReport::TrueUtilities() const {
  PayoffVector out;
  for (const auto& a : areas) {
    if (!a.true_utility) {
      throw Error("no-true-valuations", "report carries no true utilities");
    }
    out.push_back(*a.true_utility);
  }
  return out;
}

namespace {

PaymentReport FromUtilities(const CoalitionValues& values, const PayoffVector& u,
                            Mechanism mechanism) {
  const ClearingResult& clearing = values.GrandClearing();
  PaymentReport report;
  report.mechanism = mechanism;
  report.allocation = clearing.allocation;
  report.market_value = clearing.value;
  for (std::size_t a = 0; a < values.num_areas(); ++a) {
    AreaPayment row;
    row.area = values.network().area(a);
    row.bid_value = clearing.area_values[a].value_or(0.0);
    row.revealed_utility = u[a];
    row.payment = row.bid_value - u[a];
    report.organizer_balance += row.payment;
    report.areas.push_back(std::move(row));
  }
  return report;
}

}  // namespace

PaymentReport GrovesPayments(const CoalitionValues& values, std::span<const Money> pivot) {
  if (pivot.size() != values.num_areas()) {
    throw Error("dimension-mismatch", "one pivot term per area is required");
  }
  PayoffVector u(values.num_areas());
  for (std::size_t a = 0; a < u.size(); ++a) u[a] = values.Grand() - pivot[a];
  return FromUtilities(values, u, Mechanism::kCustom);
}

PaymentReport VcgPayments(const CoalitionValues& values) {
  PaymentReport report = FromUtilities(values, VcgUtilities(values), Mechanism::kVcg);
  report.vcg_utilities = report.RevealedUtilities();
  return report;
}

PaymentReport LeastCorePayments(const CoalitionValues& values, const PayoffVector& u,
                                std::optional<Money> epsilon_star,
                                const LeastCoreOptions& options) {
  const Money eps = epsilon_star ? *epsilon_star : LeastCoreEpsilon(values, options).epsilon_star;
  if (u.size() != values.num_areas()) {
    throw Error("vector-not-in-least-core", "payoff vector has the wrong number of areas");
  }
  const CoreCheck check = EpsilonCoreContains(values, u, eps, options.tolerance);
  if (!check.contained) {
    std::string detail = "payoff vector is not in the least core";
    if (std::abs(check.budget_gap) > options.tolerance) {
      detail += "; budget gap " + std::to_string(check.budget_gap);
    }
    if (!check.violated.empty()) {
      detail += "; coalition " + values.network().Describe(check.violated.front().coalition) +
                " short by " + std::to_string(check.violated.front().amount);
    }
    throw Error("vector-not-in-least-core", detail);
  }
  PaymentReport report = FromUtilities(values, u, Mechanism::kCustom);
  report.epsilon_star = eps;
  return report;
}

PaymentReport MlcPayments(const CoalitionValues& values, const LeastCoreOptions& options) {
  const MlcResult mlc = MinMaxLeastCoreUtilities(values, options);
  PaymentReport report = LeastCorePayments(values, mlc.utilities, mlc.epsilon_star, options);
  report.mechanism = Mechanism::kMlc;
  report.vcg_utilities = mlc.vcg_utilities;
  report.selection = MlcSelectionName(mlc.selection);
  return report;
}

PaymentReport VcgPayments(const BidProfile& profile, const NetworkGraph& network,
                          const AllocationGrid& grid) {
  const CoalitionValues values(profile, network, grid);
  return VcgPayments(values);
}

PaymentReport MlcPayments(const BidProfile& profile, const NetworkGraph& network,
                          const AllocationGrid& grid, const LeastCoreOptions& options) {
  const CoalitionValues values(profile, network, grid);
  return MlcPayments(values, options);
}

void AttachTrueUtilities(PaymentReport& report, const BidProfile& truth,
                         const NetworkGraph& network) {
  if (truth.size() != report.areas.size() || truth.size() != network.num_areas()) {
    throw Error("profile-mismatch", "true-valuation profile does not cover every area");
  }
  for (std::size_t a = 0; a < truth.size(); ++a) {
    std::vector<double> tuple;
    for (std::size_t link : truth[a].links()) tuple.push_back(report.allocation.at(link));
    const Money v = truth[a].Evaluate(tuple);
    report.areas[a].true_value = v;
    report.areas[a].true_utility = v - report.areas[a].payment;
  }
}

}  // namespace rxmarket
