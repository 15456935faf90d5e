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


#include "properties.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.h"
#include "rxmarket/allocation.h"
#include "rxmarket/analysis.h"
#include "rxmarket/coalition.h"
#include "rxmarket/lp.h"
#include "rxmarket/payments.h"

namespace rxmarket::testing {
namespace {

constexpr double kTol = 1e-9;

class Tally {
 public:
  explicit Tally(std::string name) { r_.name = std::move(name); }

  void Instance() { ++r_.instances; }
  void Check(bool ok, std::uint64_t seed, const std::string& what) {
    ++r_.checks;
    if (ok) return;
    if (r_.failures++ == 0) r_.detail = "seed " + std::to_string(seed) + ": " + what;
  }
  PropertyResult Result() const { return r_; }

 private:
  PropertyResult r_;
};

std::string Num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Instance seeds are spread out so that different properties with the same
// base seed still see a shared family of instances.
std::uint64_t InstanceSeed(std::uint64_t base, std::size_t i) { return base * 1'000'003 + i; }

}  // namespace

PropertyResult CheckVcgIndividualRationality(std::size_t instances, std::uint64_t seed) {
  Tally t("VCG individual rationality");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    const PaymentReport r = VcgPayments(values);
    t.Instance();
    for (const AreaPayment& a : r.areas) {
      t.Check(a.revealed_utility >= -kTol, s, a.area.name + " utility " + Num(a.revealed_utility));
    }
  }
  return t.Result();
}

PropertyResult CheckVcgDsic(std::size_t instances, std::uint64_t seed) {
  Tally t("VCG dominant-strategy incentive compatibility");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    std::mt19937_64 rng(s ^ 0x9e3779b97f4a7c15ULL);
    // Others bid arbitrary (here: random) tables; the truth is inst.profile.
    BidProfile others = inst.profile;
    for (std::size_t a = 0; a < others.size(); ++a) {
      if (rng() % 2) others = others.WithTable(a, RandomTableLike(inst.profile[a], inst.grid, rng, 0.2));
    }
    t.Instance();
    for (std::size_t a = 0; a < inst.profile.size(); ++a) {
      const BidTable& truth = inst.profile[a];
      const BidProfile honest = others.WithTable(a, truth);
      const PaymentReport base = VcgPayments(honest, inst.network, inst.grid);
      const Money u_truth = TrueUtility(truth, base.allocation, base.areas[a].payment);

      std::vector<BidTable> deviations = {truth.Scaled(0.0), truth.Scaled(0.5), truth.Scaled(2.0)};
      for (int k = 0; k < 3; ++k) deviations.push_back(RandomTableLike(truth, inst.grid, rng, 0.3));
      for (const BidTable& d : deviations) {
        const PaymentReport r = VcgPayments(others.WithTable(a, d), inst.network, inst.grid);
        const Money u_dev = TrueUtility(truth, r.allocation, r.areas[a].payment);
        t.Check(u_truth >= u_dev - kTol, s,
                "area " + std::to_string(a) + " gains " + Num(u_dev - u_truth) + " by deviating");
      }
    }
  }
  return t.Result();
}

PropertyResult CheckMlcBudgetBalance(std::size_t instances, std::uint64_t seed) {
  Tally t("MLC strong budget balance");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const PaymentReport r = MlcPayments(inst.profile, inst.network, inst.grid);
    t.Instance();
    t.Check(std::abs(r.organizer_balance) <= kTol, s, "balance " + Num(r.organizer_balance));
  }
  return t.Result();
}

PropertyResult CheckMlcIndividualRationality(std::size_t instances, std::uint64_t seed) {
  Tally t("MLC individual rationality");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const PaymentReport r = MlcPayments(inst.profile, inst.network, inst.grid);
    t.Instance();
    for (const AreaPayment& a : r.areas) {
      t.Check(a.revealed_utility >= -kTol, s, a.area.name + " utility " + Num(a.revealed_utility));
    }
  }
  return t.Result();
}

PropertyResult CheckUpperBoundEquivalence(std::size_t instances, std::uint64_t seed) {
  Tally t("lower/upper-bound system equivalence");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    const MlcResult mlc = MinMaxLeastCoreUtilities(values);
    std::mt19937_64 rng(s + 17);
    t.Instance();

    std::vector<std::pair<PayoffVector, Money>> points;
    points.emplace_back(mlc.utilities, mlc.epsilon_star);
    points.emplace_back(mlc.utilities, mlc.epsilon_star + 0.05);
    if (mlc.epsilon_star > 1e-3) points.emplace_back(mlc.utilities, mlc.epsilon_star - 1e-3);
    points.emplace_back(mlc.vcg_utilities, 0.0);
    for (int k = 0; k < 20; ++k) {
      PayoffVector u(values.num_areas());
      Money total = 0.0;
      for (std::size_t a = 0; a + 1 < u.size(); ++a) {
        u[a] = UniformDraw(rng, -0.5, values.Grand() + 0.5);
        total += u[a];
      }
      // Half the draws respect the budget equality.
      u.back() = k % 2 ? values.Grand() - total : UniformDraw(rng, -0.5, 1.5);
      points.emplace_back(std::move(u), UniformDraw(rng, 0.0, 0.6));
    }
    for (const auto& [u, eps] : points) {
      const bool lower = EpsilonCoreContains(values, u, eps).contained;
      const bool upper = SatisfiesUpperBoundSystem(values, u, eps);
      t.Check(lower == upper, s, "systems disagree at eps " + Num(eps));
    }
  }
  return t.Result();
}

PropertyResult CheckMonotonicity(std::size_t instances, std::uint64_t seed) {
  Tally t("monotonicity of V");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    const std::uint64_t end = std::uint64_t{1} << values.num_areas();
    t.Instance();
    for (std::uint64_t a = 0; a < end; ++a) {
      const Money va = values(Coalition(a));
      t.Check(std::abs(va - BruteForceValue(inst.profile, Coalition(a), inst.network, inst.grid)) <=
                  kTol,
              s, "V differs from brute force for mask " + std::to_string(a));
      for (std::uint64_t b = a;; b = (b + 1) | a) {
        if (b >= end) break;
        t.Check(va <= values(Coalition(b)) + kTol, s,
                "V(" + std::to_string(a) + ") > V(" + std::to_string(b) + ")");
      }
    }
  }
  return t.Result();
}

PropertyResult CheckStarCore(std::size_t instances, std::uint64_t seed) {
  Tally t("star graphs have a nonempty core");
  RandomOptions star;
  star.force_star = true;
  star.max_areas = 5;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s, star);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    t.Instance();
    const LeastCoreResult lc = LeastCoreEpsilon(values);
    t.Check(lc.epsilon_star <= kTol, s, "epsilon* " + Num(lc.epsilon_star));
    const PayoffVector w = StarCoreWitness(values);
    t.Check(EpsilonCoreContains(values, w, 0.0).contained, s, "hub witness rejected");
  }
  return t.Result();
}

PropertyResult CheckConstraintGeneration(std::size_t instances, std::uint64_t seed) {
  Tally t("constraint generation matches full enumeration");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    t.Instance();
    const Money cg = LeastCoreEpsilon(values).epsilon_star;
    const Money full = LeastCoreEpsilonFull(values).epsilon_star;
    t.Check(std::abs(cg - full) <= kTol, s, "cg " + Num(cg) + " vs full " + Num(full));
    if (values.num_areas() == 3) {
      const Money closed = ThreePlayerLeastCore(values(Coalition(0b011)), values(Coalition(0b101)),
                                                values(Coalition(0b110)), values.Grand());
      t.Check(std::abs(cg - closed) <= kTol, s, "cg " + Num(cg) + " vs closed form " + Num(closed));
    }
  }
  return t.Result();
}

PropertyResult CheckUnilateralBound(std::size_t instances, std::uint64_t seed) {
  Tally t("unilateral deviation bound under MLC");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    t.Instance();
    const std::size_t a = s % inst.profile.size();
    const DeviationCheck c =
        CheckUnilateralDeviations(inst.profile, a, inst.network, inst.grid, 100, s + 5);
    t.Check(c.violations == 0, s,
            std::to_string(c.violations) + " violations, max gain " + Num(c.max_gain) +
                " bound " + Num(c.bound));
  }
  return t.Result();
}

PropertyResult CheckMlcUndercharge(std::size_t instances, std::uint64_t seed) {
  Tally t("MLC charges at most epsilon* less than VCG");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    const PaymentReport vcg = VcgPayments(values);
    const PaymentReport mlc = MlcPayments(values);
    const Money eps = *mlc.epsilon_star;
    t.Instance();
    for (std::size_t a = 0; a < vcg.areas.size(); ++a) {
      t.Check(mlc.areas[a].payment >= vcg.areas[a].payment - eps - kTol, s,
              "area " + std::to_string(a) + " MLC " + Num(mlc.areas[a].payment) + " VCG " +
                  Num(vcg.areas[a].payment) + " eps " + Num(eps));
    }
  }
  return t.Result();
}

PropertyResult CheckGroupBound(std::size_t instances, std::uint64_t seed) {
  Tally t("group manipulation bound under MLC");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const std::size_t n = inst.profile.size();
    const Coalition s_mask(1 + s % ((std::uint64_t{1} << n) - 2));
    t.Instance();
    for (double k : {0.0, 0.5, 2.0, 5.0}) {
      const ManipulationOutcome m = GroupManipulationExperiment(
          inst.profile, s_mask, ScaleTransform(k), "scale", inst.network, inst.grid);
      const Money eps_bar = std::max(m.epsilon_star_truthful, m.epsilon_star_manipulated);
      t.Check(m.mlc.manipulated_total <= m.merged_vcg_utility + eps_bar + 1e-6, s,
              "scale " + Num(k) + ": total " + Num(m.mlc.manipulated_total) + " above " +
                  Num(m.merged_vcg_utility + eps_bar));
    }
  }
  return t.Result();
}

PropertyResult CheckMergedValue(std::size_t instances, std::uint64_t seed) {
  Tally t("merged bids keep the market value");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const std::size_t n = inst.profile.size();
    const Coalition group(1 + s % ((std::uint64_t{1} << n) - 1));
    t.Instance();
    const MergedBid merged = MergeBids(inst.profile, group, inst.network, inst.grid);
    std::vector<const BidTable*> tables = {&merged.table};
    for (std::size_t a = 0; a < n; ++a) {
      if (!group.Contains(a)) tables.push_back(&inst.profile[a]);
    }
    const auto internal = inst.network.InternalLinks(group);
    std::vector<std::size_t> free_links;
    for (std::size_t e = 0; e < inst.network.num_links(); ++e) {
      if (std::find(internal.begin(), internal.end(), e) == internal.end()) free_links.push_back(e);
    }
    const auto best = MaximizeOverLinks(tables, free_links, inst.grid.DefaultIndices(), inst.grid);
    const Money v = ClearMarket(inst.profile, inst.network, inst.grid).value;
    t.Check(best && std::abs(best->value + merged.constant - v) <= kTol, s,
            "merged market value differs");
  }
  return t.Result();
}

PropertyResult CheckMinMaxOptimality(std::size_t instances, std::uint64_t seed) {
  Tally t("min-max gap is smallest over the least core");
  for (std::size_t i = 0; i < instances; ++i) {
    const std::uint64_t s = InstanceSeed(seed, i);
    const Instance inst = RandomInstance(s);
    const CoalitionValues values(inst.profile, inst.network, inst.grid);
    const MlcResult mlc = MinMaxLeastCoreUtilities(values);
    const std::size_t n = values.num_areas();
    t.Instance();

    // Vertices of the least core under random objectives, written out with
    // every coalition row, and midpoints between them and the MLC point.
    LinearProgram lp;
    for (std::size_t a = 0; a < n; ++a) lp.AddVariable(0.0, -kInfinity, kInfinity);
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t m = 1; m < full; ++m) {
      std::vector<double> row(n, 0.0);
      for (std::size_t a = 0; a < n; ++a) row[a] = (m >> a) & 1U ? 1.0 : 0.0;
      lp.AddRow(row, RowSense::kGreaterEqual, values(Coalition(m)) - mlc.epsilon_star - 1e-12);
    }
    lp.AddRow(std::vector<double>(n, 1.0), RowSense::kEqual, values.Grand());

    std::mt19937_64 rng(s + 99);
    for (int k = 0; k < 10; ++k) {
      for (double& c : lp.objective) c = UniformDraw(rng, -1.0, 1.0);
      const LpSolution sol = SolveLp(lp);
      t.Check(sol.status == LpStatus::kOptimal, s, "least core empty at the reported epsilon*");
      if (sol.status != LpStatus::kOptimal) continue;
      for (double w : {1.0, 0.5}) {
        Money gap = -kInfinity;
        for (std::size_t a = 0; a < n; ++a) {
          const double u = w * sol.x[a] + (1 - w) * mlc.utilities[a];
          gap = std::max(gap, u - mlc.vcg_utilities[a]);
        }
        t.Check(gap >= mlc.max_gap - 1e-9, s,
                "least-core point with max gap " + Num(gap) + " below " + Num(mlc.max_gap));
      }
    }
  }
  return t.Result();
}

std::vector<NamedProperty> AcceptanceProperties() {
  return {
      {"vcg-individual-rationality", &CheckVcgIndividualRationality},
      {"vcg-dsic", &CheckVcgDsic},
      {"mlc-budget-balance", &CheckMlcBudgetBalance},
      {"mlc-individual-rationality", &CheckMlcIndividualRationality},
      {"upper-bound-equivalence", &CheckUpperBoundEquivalence},
      {"monotonicity", &CheckMonotonicity},
      {"star-core", &CheckStarCore},
      {"constraint-generation", &CheckConstraintGeneration},
      {"unilateral-bound", &CheckUnilateralBound},
      {"mlc-undercharge", &CheckMlcUndercharge},
  };
}

}  // namespace rxmarket::testing
