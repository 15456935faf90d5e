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

#include <gtest/gtest.h>

#include "fixtures.h"

namespace rxmarket {
namespace {

using testing::CaseStudy;
using testing::TwoAreas;

TEST(VcgPayments, CaseStudy) {
  const auto inst = CaseStudy();
  const PaymentReport r = VcgPayments(inst.profile, inst.network, inst.grid);
  EXPECT_EQ(r.mechanism, Mechanism::kVcg);
  EXPECT_NEAR(r.market_value, 1.10136, 1e-9);
  const std::vector<double> p = {-0.15376, 0.26352, 0.26344};
  const std::vector<double> u = {0.34344, 0.27936, 0.10536};
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_NEAR(r.areas[a].payment, p[a], 1e-9);
    EXPECT_NEAR(r.areas[a].revealed_utility, u[a], 1e-9);
    EXPECT_NEAR(r.areas[a].bid_value - r.areas[a].payment, r.areas[a].revealed_utility, 1e-12);
  }
  EXPECT_NEAR(r.organizer_balance, 0.3732, 1e-9);
  EXPECT_EQ(r.areas[1].area.name, "a2");
  EXPECT_FALSE(r.epsilon_star);
}

TEST(MlcPayments, CaseStudy) {
  const auto inst = CaseStudy();
  const PaymentReport r = MlcPayments(inst.profile, inst.network, inst.grid);
  EXPECT_EQ(r.mechanism, Mechanism::kMlc);
  const std::vector<double> p = {-0.27816, 0.13912, 0.13904};
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(r.areas[a].payment, p[a], 1e-9);
  EXPECT_NEAR(r.organizer_balance, 0.0, 1e-9);
  ASSERT_TRUE(r.epsilon_star);
  EXPECT_NEAR(*r.epsilon_star, 0.1244, 1e-9);
  ASSERT_TRUE(r.vcg_utilities);
  EXPECT_NEAR((*r.vcg_utilities)[0], 0.34344, 1e-9);
  EXPECT_EQ(r.selection, std::optional<std::string>("min-distance"));
}

TEST(VcgPayments, TwoAreaDeficit) {
  const auto inst = TwoAreas(3.0, -1.0);
  const PaymentReport r = VcgPayments(inst.profile, inst.network, inst.grid);
  EXPECT_DOUBLE_EQ(r.allocation[0], 1.0);
  EXPECT_NEAR(r.areas[0].payment, 1.0, 1e-12);
  EXPECT_NEAR(r.areas[1].payment, -3.0, 1e-12);
  EXPECT_NEAR(r.organizer_balance, -2.0, 1e-12);
}

TEST(GrovesPayments, PivotShiftsUtilities) {
  const auto inst = CaseStudy();
  const CoalitionValues values(inst.profile, inst.network, inst.grid);
  const std::vector<Money> pivot = {0.1, 0.2, 0.3};
  const PaymentReport r = GrovesPayments(values, pivot);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_NEAR(r.areas[a].revealed_utility, 1.10136 - pivot[a], 1e-9);
  }
}

TEST(LeastCorePayments, RejectsPointsOutsideTheLeastCore) {
  const auto inst = CaseStudy();
  const CoalitionValues values(inst.profile, inst.network, inst.grid);
  const PayoffVector inside = {0.46784, 0.40376, 0.22976};
  const PaymentReport r = LeastCorePayments(values, inside);
  EXPECT_NEAR(r.areas[0].payment, -0.27816, 1e-9);
  EXPECT_NEAR(*r.epsilon_star, 0.1244, 1e-9);
  try {
    LeastCorePayments(values, {0.5, 0.4, 0.20136});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "vector-not-in-least-core");
  }
}

TEST(PaymentReport, TrueUtilities) {
  const auto inst = CaseStudy();
  PaymentReport r = VcgPayments(inst.profile, inst.network, inst.grid);
  try {
    r.TrueUtilities();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "no-true-valuations");
  }
  AttachTrueUtilities(r, inst.profile, inst.network);
  const PayoffVector t = r.TrueUtilities();
  const PayoffVector u = r.RevealedUtilities();
  for (std::size_t a = 0; a < 3; ++a) EXPECT_NEAR(t[a], u[a], 1e-12);
  EXPECT_EQ(r.Payments().size(), 3u);
  EXPECT_STREQ(MechanismName(Mechanism::kMlc), "MLC");
  EXPECT_STREQ(MechanismName(Mechanism::kVcg), "VCG");
}

}  // namespace
}  // namespace rxmarket
