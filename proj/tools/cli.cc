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


#include "cli.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "casestudy_fixture.h"
#include "rxmarket/allocation.h"
#include "rxmarket/analysis.h"
#include "rxmarket/payments.h"

namespace rxmarket::cli {

using nlohmann::json;

namespace {

constexpr char kTieBreak[] = "lexicographic-smallest";

struct Flags {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<double> scale;
  std::string coalition;
  double tol = kTolerance;
  std::string out;
  std::size_t threads = 1;
  std::string selection = "min-distance";
  std::optional<double> epsilon_bar;
};

std::string Money4(double x) {
  char buf[64];
  // Avoid printing "-0.0000".
  if (std::abs(x) < 5e-5) x = 0.0;
  std::snprintf(buf, sizeof(buf), "%.4f", x);
  return buf;
}

// Left-aligned first column, right-aligned others.
void PrintTable(std::ostream& os, const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  }
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      } else {
        os << "  " << std::right << std::setw(static_cast<int>(width[c])) << r[c];
      }
    }
    os << "\n";
  }
}

std::string Names(const NetworkGraph& network, Coalition s) {
  std::string out;
  for (std::size_t a : s.Members()) out += (out.empty() ? "" : ",") + network.area(a).name;
  return out;
}

json CoalitionJson(const NetworkGraph& network, Coalition s) {
  json out = json::array();
  for (std::size_t a : s.Members()) out.push_back(network.area(a).name);
  return out;
}

json AllocationJson(const NetworkGraph& network, const AllocationVector& x) {
  json out = json::object();
  for (std::size_t k = 0; k < x.size(); ++k) out[network.link(k).name] = x[k];
  return out;
}

std::string AllocationText(const AllocationVector& x) {
  std::string out = "[";
  for (std::size_t k = 0; k < x.size(); ++k) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", x[k]);
    out += (k ? ", " : "") + std::string(buf);
  }
  return out + "]";
}

LeastCoreOptions MakeOptions(const Flags& f) {
  LeastCoreOptions o;
  o.tolerance = f.tol;
  o.selection = f.selection == "vertex" ? MlcSelection::kVertex : MlcSelection::kMinDistance;
  return o;
}

struct Loaded {
  Scenario scenario;
  std::string origin;
};

Loaded Load(const Flags& f, bool allow_default) {
  if (f.scenario.empty()) {
    if (!allow_default) throw Error("missing-scenario", "a scenario file is required");
    return {CaseStudyScenario(), "casestudy (bundled)"};
  }
  return {LoadScenario(f.scenario), f.scenario};
}

Coalition ParseCoalition(const NetworkGraph& network, const std::vector<std::string>& names) {
  std::vector<AreaId> ids;
  for (const auto& n : names) ids.push_back(AreaId{n});
  return network.ToCoalition(ids);
}

std::vector<std::string> SplitNames(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json ReportJson(const PaymentReport& r, const NetworkGraph& network) {
  json areas = json::array();
  for (const AreaPayment& a : r.areas) {
    json row = {{"area", a.area.name},
                {"payment", a.payment},
                {"bid_value", a.bid_value},
                {"revealed_utility", a.revealed_utility}};
    if (a.true_value) row["true_value"] = *a.true_value;
    if (a.true_utility) row["true_utility"] = *a.true_utility;
    areas.push_back(row);
  }
  json out = {{"mechanism", MechanismName(r.mechanism)},
              {"allocation", AllocationJson(network, r.allocation)},
              {"market_value", r.market_value},
              {"areas", areas},
              {"organizer_balance", r.organizer_balance}};
  if (r.epsilon_star) out["epsilon_star"] = *r.epsilon_star;
  if (r.vcg_utilities) out["vcg_utilities"] = *r.vcg_utilities;
  if (r.selection) out["selection"] = *r.selection;
  return out;
}

void PrintReport(std::ostream& os, const PaymentReport& r) {
  os << MechanismName(r.mechanism) << " payments at allocation " << AllocationText(r.allocation)
     << ", V = " << Money4(r.market_value) << "\n";
  const bool with_truth = !r.areas.empty() && r.areas.front().true_utility.has_value();
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"area", "payment", "bid value", "revealed utility"});
  if (with_truth) rows.back().push_back("true utility");
  for (const AreaPayment& a : r.areas) {
    rows.push_back({a.area.name, Money4(a.payment), Money4(a.bid_value),
                    Money4(a.revealed_utility)});
    if (with_truth) rows.back().push_back(Money4(a.true_utility.value_or(0.0)));
  }
  PrintTable(os, rows);
  os << "organizer balance: " << Money4(r.organizer_balance) << "\n";
  if (r.epsilon_star) os << "least-core epsilon: " << Money4(*r.epsilon_star) << "\n";
}

json CmdClear(const Loaded& in, std::ostream& os) {
  const Scenario& s = in.scenario;
  const ClearingResult r = ClearMarket(s.bids, s.network, s.grid);
  os << "allocation: " << AllocationText(r.allocation) << "\n";
  os << "market value: " << Money4(r.value) << "\n";
  std::vector<std::vector<std::string>> rows = {{"area", "bid value"}};
  json values = json::object();
  for (std::size_t a = 0; a < s.network.num_areas(); ++a) {
    rows.push_back({s.network.area(a).name, Money4(r.area_values[a].value_or(0.0))});
    values[s.network.area(a).name] = r.area_values[a].value_or(0.0);
  }
  PrintTable(os, rows);
  return {{"allocation", AllocationJson(s.network, r.allocation)},
          {"market_value", r.value},
          {"area_values", values}};
}

json CmdPayments(const Loaded& in, const Flags& f, bool mlc, std::ostream& os) {
  const Scenario& s = in.scenario;
  const CoalitionValues values(s.bids, s.network, s.grid);
  PaymentReport r = mlc ? MlcPayments(values, MakeOptions(f)) : VcgPayments(values);
  if (s.truth) AttachTrueUtilities(r, *s.truth, s.network);
  PrintReport(os, r);
  return ReportJson(r, s.network);
}

json CmdLeastCore(const Loaded& in, const Flags& f, std::ostream& os) {
  const Scenario& s = in.scenario;
  const CoalitionValues values(s.bids, s.network, s.grid);
  const LeastCoreResult r = LeastCoreEpsilon(values, MakeOptions(f));
  os << "least-core epsilon: " << Money4(r.epsilon_star) << "\n";
  os << "separation rounds: " << r.iterations
     << (r.used_full_enumeration ? " (full enumeration fallback)" : "") << "\n";
  std::vector<std::vector<std::string>> rows = {{"area", "witness utility"}};
  for (std::size_t a = 0; a < r.witness.size(); ++a) {
    rows.push_back({s.network.area(a).name, Money4(r.witness[a])});
  }
  PrintTable(os, rows);
  json binding = json::array();
  os << "binding coalitions:";
  for (Coalition c : r.binding) {
    os << " {" << Names(s.network, c) << "}";
    binding.push_back(CoalitionJson(s.network, c));
  }
  os << "\n";
  return {{"epsilon_star", r.epsilon_star},
          {"witness", r.witness},
          {"binding", binding},
          {"iterations", r.iterations},
          {"used_full_enumeration", r.used_full_enumeration}};
}

json CmdManipulate(const Loaded& in, const Flags& f, std::ostream& os) {
  const Scenario& s = in.scenario;
  const ExperimentConfig& x = s.experiments;
  std::vector<std::string> names =
      !f.coalition.empty() ? SplitNames(f.coalition) : x.coalition.value_or(std::vector<std::string>{});
  if (names.empty()) throw Error("missing-coalition", "pass --coalition or set experiments.coalition");
  const Coalition coalition = ParseCoalition(s.network, names);
  const double scale = f.scale ? *f.scale : x.scale.value_or(-1.0);
  if (scale < 0.0) throw Error("missing-scale", "pass --scale or set experiments.scale");
  const std::optional<double> eps_bar = f.epsilon_bar ? f.epsilon_bar : x.epsilon_bar;
  const BidProfile& truth = s.truth ? *s.truth : s.bids;

  std::ostringstream strategy;
  strategy << "scale x" << scale;
  const ManipulationOutcome r =
      GroupManipulationExperiment(truth, coalition, ScaleTransform(scale), strategy.str(),
                                  s.network, s.grid, eps_bar, MakeOptions(f));

  os << "coalition {" << Names(s.network, coalition) << "}, " << r.strategy << "\n";
  PrintTable(os, {{"mechanism", "truthful total", "manipulated total", "gain"},
                  {"VCG", Money4(r.vcg.truthful_total), Money4(r.vcg.manipulated_total),
                   Money4(r.vcg.gain())},
                  {"MLC", Money4(r.mlc.truthful_total), Money4(r.mlc.manipulated_total),
                   Money4(r.mlc.gain())}});
  os << "least-core epsilon truthful/manipulated: " << Money4(r.epsilon_star_truthful) << " / "
     << Money4(r.epsilon_star_manipulated) << "\n";
  os << "merged-area VCG utility: " << Money4(r.merged_vcg_utility) << "\n";
  if (r.bound) {
    os << "group bound (merged VCG utility + epsilon bar " << Money4(*r.epsilon_bar)
       << "): " << Money4(*r.bound) << "\n";
  }
  auto mech = [](const MechanismOutcome& m) {
    return json{{"truthful_total", m.truthful_total},
                {"manipulated_total", m.manipulated_total},
                {"gain", m.gain()}};
  };
  json out = {{"coalition", CoalitionJson(s.network, coalition)},
              {"strategy", r.strategy},
              {"scale", scale},
              {"VCG", mech(r.vcg)},
              {"MLC", mech(r.mlc)},
              {"epsilon_star_truthful", r.epsilon_star_truthful},
              {"epsilon_star_manipulated", r.epsilon_star_manipulated},
              {"merged_vcg_utility", r.merged_vcg_utility}};
  if (r.epsilon_bar) out["epsilon_bar"] = *r.epsilon_bar;
  if (r.bound) out["bound"] = *r.bound;
  return out;
}

json CmdMonteCarlo(const Loaded& in, const Flags& f, std::ostream& os) {
  const Scenario& s = in.scenario;
  const ExperimentConfig& x = s.experiments;
  EpsilonBarOptions o;
  o.samples = f.samples ? *f.samples : x.samples.value_or(1000);
  o.seed = f.seed ? *f.seed : x.seed.value_or(0);
  o.ranges = x.ranges.value_or(CoefficientRanges{});
  o.threads = f.threads;
  o.least_core = MakeOptions(f);
  const auto start = std::chrono::steady_clock::now();
  const EpsilonBarEstimate e = EstimateEpsilonBar(s.network, s.grid, o);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  os << "samples: " << e.samples << ", seed: " << e.seed << ", generator: " << e.generator << "\n";
  os << "ranges: quadratic [" << e.ranges.quadratic_lo << ", " << e.ranges.quadratic_hi
     << "], cross [" << e.ranges.cross_lo << ", " << e.ranges.cross_hi << "]\n";
  std::vector<std::vector<std::string>> rows = {{"statistic", "epsilon*"}};
  rows.push_back({"max (epsilon bar)", Money4(e.max)});
  rows.push_back({"mean", Money4(e.mean)});
  json quantiles = json::array();
  for (const auto& [level, value] : e.quantiles) {
    std::ostringstream label;
    label << "quantile " << level;
    rows.push_back({label.str(), Money4(value)});
    quantiles.push_back({{"level", level}, {"value", value}});
  }
  PrintTable(os, rows);
  os << "max attained by sample " << e.argmax << " (seed " << e.seed + e.argmax << ")\n";
  return {{"samples", e.samples},
          {"seed", e.seed},
          {"generator", e.generator},
          {"ranges",
           {{"quadratic", {e.ranges.quadratic_lo, e.ranges.quadratic_hi}},
            {"cross", {e.ranges.cross_lo, e.ranges.cross_hi}}}},
          {"epsilon_bar", e.max},
          {"argmax_sample", e.argmax},
          {"mean", e.mean},
          {"quantiles", quantiles},
          {"threads", f.threads},
          {"seconds", seconds}};
}

json CmdGroves(std::ostream& os) {
  const GrovesCertificate c = GrovesBudgetInfeasibility();
  os << "strong budget balance under Groves payments, two areas, choices {0,1}\n";
  std::vector<std::vector<std::string>> rows = {{"profile", "A row", "b"}};
  for (std::size_t r = 0; r < c.matrix.size(); ++r) {
    std::string row;
    for (double v : c.matrix[r]) row += (row.empty() ? "" : " ") + std::to_string(static_cast<int>(v));
    rows.push_back({"(" + std::to_string(c.profiles[r].first + 1) + "," +
                        std::to_string(c.profiles[r].second + 1) + ")",
                    row, Money4(c.rhs[r])});
  }
  PrintTable(os, rows);
  os << "rank(A) = " << c.rank << ", rank([A|b]) = " << c.augmented_rank
     << ", least-squares residual = " << Money4(c.residual) << "\n";
  os << (c.consistent() ? "consistent: pivot terms exist\n"
                        : "inconsistent: no pivot terms give strong budget balance\n");
  return {{"matrix", c.matrix},
          {"rhs", c.rhs},
          {"rank", c.rank},
          {"augmented_rank", c.augmented_rank},
          {"residual", c.residual},
          {"consistent", c.consistent()}};
}

json CmdCaseStudy(const Loaded& in, const Flags& f, std::ostream& os, bool& all_ok) {
  const auto checks = CheckCaseStudy(in.scenario, MakeOptions(f));
  std::vector<std::vector<std::string>> rows = {
      {"check", "expected", "actual", "tolerance", "status"}};
  json items = json::array();
  all_ok = true;
  for (const auto& c : checks) {
    char tol[32];
    std::snprintf(tol, sizeof(tol), "%.0e", c.tolerance);
    rows.push_back({c.name, Money4(c.expected), Money4(c.actual), tol, c.ok() ? "ok" : "MISMATCH"});
    items.push_back({{"name", c.name},
                     {"expected", c.expected},
                     {"actual", c.actual},
                     {"tolerance", c.tolerance},
                     {"ok", c.ok()}});
    all_ok = all_ok && c.ok();
  }
  PrintTable(os, rows);
  os << (all_ok ? "all reference values reproduced\n" : "reference mismatch\n");
  return {{"checks", items}, {"ok", all_ok}};
}

}  // namespace

bool ReferenceCheck::ok() const { return std::abs(actual - expected) <= tolerance; }

Scenario CaseStudyScenario() { return ParseScenario(kCaseStudyJson, "casestudy.json"); }

std::vector<ReferenceCheck> CheckCaseStudy(const Scenario& s, const LeastCoreOptions& options) {
  std::vector<ReferenceCheck> out;
  auto add = [&](std::string name, double expected, double actual, double tol) {
    out.push_back({std::move(name), expected, actual, tol});
  };
  const NetworkGraph& net = s.network;
  auto area = [&](const char* name) { return net.AreaIndex(AreaId{name}); };

  const CoalitionValues values(s.bids, net, s.grid);
  const ClearingResult& clearing = values.GrandClearing();
  const double alloc[] = {0.4, 0.0, 0.2};
  for (std::size_t k = 0; k < 3 && k < clearing.allocation.size(); ++k) {
    add("allocation " + net.link(k).name, alloc[k], clearing.allocation[k], kTolerance);
  }
  add("market value", 1.1014, clearing.value, 1e-3);

  const PaymentReport vcg = VcgPayments(values);
  const double vcg_p[] = {-0.154, 0.264, 0.263};
  const double vcg_u[] = {0.343, 0.279, 0.105};
  const PaymentReport mlc = MlcPayments(values, options);
  const double mlc_p[] = {-0.278, 0.139, 0.139};
  const double mlc_u[] = {0.468, 0.404, 0.230};
  const char* names[] = {"a1", "a2", "a3"};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t a = area(names[i]);
    add(std::string("VCG payment ") + names[i], vcg_p[i], vcg.areas[a].payment, 5e-4);
    add(std::string("VCG utility ") + names[i], vcg_u[i], vcg.areas[a].revealed_utility, 5e-4);
  }
  add("VCG organizer balance", 0.373, vcg.organizer_balance, 5e-4);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t a = area(names[i]);
    add(std::string("MLC payment ") + names[i], mlc_p[i], mlc.areas[a].payment, 5e-4);
    add(std::string("MLC utility ") + names[i], mlc_u[i], mlc.areas[a].revealed_utility, 5e-4);
  }
  add("MLC organizer balance", 0.0, mlc.organizer_balance, kTolerance);
  add("least-core epsilon", 0.124, mlc.epsilon_star.value_or(-1.0), 5e-4);

  const Coalition pair = Coalition::Singleton(area("a1")).With(area("a2"));
  add("V({a1,a2})", 0.996, values(pair), 5e-4);

  const ManipulationOutcome m = GroupManipulationExperiment(
      s.bids, pair, ScaleTransform(5.0), "scale x5", net, s.grid, std::nullopt, options);
  add("VCG {a1,a2} truthful total", 0.622, m.vcg.truthful_total, 1e-3);
  add("VCG {a1,a2} total under x5", 1.679, m.vcg.manipulated_total, 1e-3);
  add("MLC {a1,a2} truthful total", 0.872, m.mlc.truthful_total, 1e-3);
  add("MLC {a1,a2} total under x5", 0.996, m.mlc.manipulated_total, 1e-3);

  const GrovesCertificate g = GrovesBudgetInfeasibility();
  add("Groves rank(A)", 3, static_cast<double>(g.rank), 0);
  add("Groves rank([A|b])", 4, static_cast<double>(g.augmented_rank), 0);
  return out;
}

int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission-capacity market clearing with VCG and least-core payments",
               "rxmarket"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Flags f;
  struct Command {
    std::string name;
    std::string help;
    bool scenario_optional;
  };
  const std::vector<Command> commands = {
      {"clear", "efficient allocation and market value", false},
      {"vcg", "VCG payments (Clarke pivot)", false},
      {"mlc", "min-max least-core payments", false},
      {"leastcore", "least-core epsilon, witness and binding coalitions", false},
      {"manipulate", "coalition bid-scaling experiment under VCG and MLC", false},
      {"montecarlo", "Monte-Carlo estimate of the least-core epsilon bound", true},
      {"certify-groves", "certificate that Groves payments cannot balance the budget", true},
      {"casestudy", "run every mechanism on the bundled triangle and diff against references",
       true},
  };
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    if (c.name != "certify-groves") {
      auto* opt = sub->add_option("scenario", f.scenario, "scenario JSON file");
      if (!c.scenario_optional) opt->required();
      opt->check(CLI::ExistingFile);
    }
    sub->add_option("--tol", f.tol, "solver tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--out", f.out, "write the machine-readable report here");
    if (c.name == "mlc" || c.name == "manipulate" || c.name == "casestudy") {
      sub->add_option("--selection", f.selection, "tie-break among min-max optima")
          ->check(CLI::IsMember({"min-distance", "vertex"}));
    }
    if (c.name == "manipulate") {
      sub->add_option("--coalition", f.coalition, "comma-separated areas, e.g. a1,a2");
      sub->add_option("--scale", f.scale, "bid scale factor")->check(CLI::NonNegativeNumber);
      sub->add_option("--epsilon-bar", f.epsilon_bar, "bound on epsilon* for the group bound")
          ->check(CLI::NonNegativeNumber);
    }
    if (c.name == "montecarlo") {
      sub->add_option("--seed", f.seed, "base seed; sample i uses seed + i");
      sub->add_option("--samples", f.samples, "number of sampled profiles")
          ->check(CLI::PositiveNumber);
      sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    }
  }

  std::vector<const char*> argv = {"rxmarket"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  int status = kExitOk;
  json report = {{"tool", "rxmarket"},
                 {"version", kVersion},
                 {"command", command},
                 {"tolerance", f.tol},
                 {"tie_break", kTieBreak}};
  try {
    json results;
    if (command == "certify-groves") {
      results = CmdGroves(out);
    } else {
      const Loaded in = Load(f, command == "montecarlo" || command == "casestudy");
      report["scenario"] = in.origin;
      report["digest"] = ScenarioDigest(in.scenario);
      if (command == "mlc" || command == "manipulate" || command == "casestudy") {
        report["mlc_selection"] = f.selection;
      }
      if (command == "clear") {
        results = CmdClear(in, out);
      } else if (command == "vcg") {
        results = CmdPayments(in, f, false, out);
      } else if (command == "mlc") {
        results = CmdPayments(in, f, true, out);
      } else if (command == "leastcore") {
        results = CmdLeastCore(in, f, out);
      } else if (command == "manipulate") {
        results = CmdManipulate(in, f, out);
      } else if (command == "montecarlo") {
        results = CmdMonteCarlo(in, f, out);
      } else {
        bool ok = true;
        results = CmdCaseStudy(in, f, out, ok);
        if (!ok) status = kExitMismatch;
      }
    }
    report["results"] = results;
  } catch (const ScenarioError& e) {
    for (const Diagnostic& d : e.diagnostics()) {
      err << e.origin() << ":" << d.line << ": " << d.code << ": " << d.message << "\n";
    }
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return e.code() == "unknown-area" || e.code().rfind("missing-", 0) == 0 ? kExitUsage
                                                                           : kExitInvalid;
  }

  if (!f.out.empty()) {
    std::ofstream file(f.out);
    if (!file) {
      err << "error: cannot write " << f.out << "\n";
      return kExitInvalid;
    }
    file << report.dump(2) << "\n";
  }
  return status;
}

}  // namespace rxmarket::cli
