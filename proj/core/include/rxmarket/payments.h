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


// Groves/VCG and least-core-selecting payment rules.
//
// Every rule charges p_a = b_a(χ*) - ū_a for some vector of revealed
// utilities ū; the rules differ only in how ū is chosen.

#ifndef RXMARKET_PAYMENTS_H_
#define RXMARKET_PAYMENTS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rxmarket/bids.h"
#include "rxmarket/coalition.h"
#include "rxmarket/common.h"

namespace rxmarket {

enum class Mechanism { kVcg, kMlc, kCustom };

const char* MechanismName(Mechanism mechanism);

struct AreaPayment {
  AreaId area;
  Money payment = 0.0;
  // b_a(χ*)
  Money bid_value = 0.0;
  Money revealed_utility = 0.0;
  // v_a(χ*) and v_a(χ*) - p_a, when a true-valuation profile was attached.
  std::optional<Money> true_value;
  std::optional<Money> true_utility;
};

struct PaymentReport {
  Mechanism mechanism = Mechanism::kCustom;
  AllocationVector allocation;
  Money market_value = 0.0;
  std::vector<AreaPayment> areas;
  // u_MO = Σ p_a
  Money organizer_balance = 0.0;
  // Set by the least-core rules.
  std::optional<Money> epsilon_star;
  std::optional<PayoffVector> vcg_utilities;
  std::optional<std::string> selection;

  PayoffVector Payments() const;
  PayoffVector RevealedUtilities() const;
  // Throws Error("no-true-valuations") when none were attached.
  PayoffVector TrueUtilities() const;
};

// Groves payments with pivot terms h_a:
// p_a = h_a - Σ_{j≠a} b_j(χ*), so ū_a = V(B) - h_a.
PaymentReport GrovesPayments(const CoalitionValues& values, std::span<const Money> pivot);

// Clarke pivot h_a = V(B_{-a}).
PaymentReport VcgPayments(const CoalitionValues& values);

// Payments for a vector in the least core. `epsilon_star` is computed when
// not supplied. Throws Error("vector-not-in-least-core").
PaymentReport LeastCorePayments(const CoalitionValues& values, const PayoffVector& u,
                                std::optional<Money> epsilon_star = std::nullopt,
                                const LeastCoreOptions& options = {});

// Min-max least-core payments.
PaymentReport MlcPayments(const CoalitionValues& values, const LeastCoreOptions& options = {});

// Convenience overloads that build the coalition values internally.
PaymentReport VcgPayments(const BidProfile& profile, const NetworkGraph& network,
                          const AllocationGrid& grid);
PaymentReport MlcPayments(const BidProfile& profile, const NetworkGraph& network,
                          const AllocationGrid& grid, const LeastCoreOptions& options = {});

// Fills true_value and true_utility from a true-valuation profile evaluated
// at the report's allocation. Throws Error("tuple-not-in-domain") when χ*
// lies outside an area's true feasible set.
void AttachTrueUtilities(PaymentReport& report, const BidProfile& truth,
                         const NetworkGraph& network);

}  // namespace rxmarket

#endif  // RXMARKET_PAYMENTS_H_
