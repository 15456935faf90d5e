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


// Scenario documents (JSON) and their validation.
//
//   {
//     "areas": ["a1", "a2", ...],
//     "links": [{"id": "e1", "ends": ["a1", "a2"]}, ...],
//     "grid": {"values": [0, 0.1, ...], "default": 0},
//         or {"e1": {"values": [...], "default": 0}, ...},
//     "bids": [{"area": "a1", "kind": "quadratic", "coeffs": [...]},
//              {"area": "a2", "kind": "table", "links": ["e1", "e2"],
//               "entries": [{"chi": [0, 0], "value": 0}, ...]}, ...],
//     "truth": [ same shape as "bids" ],                          (optional)
//     "experiments": {"seed": 7, "samples": 1000,                 (optional)
//                     "ranges": {"quadratic": [0, 3], "cross": [-9, 0]},
//                     "coalition": ["a1", "a2"], "scale": 5,
//                     "epsilon_bar": 0.159}
//   }
//
// Quadratic coefficients are flat: one weight per incident link, then one per
// incident-link pair, all in canonical order. Table "links" defaults to the
// area's incident links in canonical order.

#ifndef RXMARKET_SCENARIO_H_
#define RXMARKET_SCENARIO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rxmarket/bids.h"
#include "rxmarket/common.h"
#include "rxmarket/network.h"

namespace rxmarket {

struct Diagnostic {
  std::string code;
  std::string message;
  // 1-based; 0 when the problem has no location in the file.
  std::size_t line = 0;
  // JSON pointer of the offending value.
  std::string pointer;
};

class ScenarioError : public Error {
 public:
  ScenarioError(std::string origin, std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }
  const std::string& origin() const { return origin_; }

 private:
  static std::string Format(const std::string& origin, const std::vector<Diagnostic>& d);

  std::string origin_;
  std::vector<Diagnostic> diagnostics_;
};

// How a table was specified, kept for saving.
struct BidSource {
  enum class Kind { kQuadratic, kTable };
  Kind kind = Kind::kTable;
  QuadraticCoefficients coefficients;
};

struct ExperimentConfig {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<CoefficientRanges> ranges;
  std::optional<std::vector<std::string>> coalition;
  std::optional<double> scale;
  std::optional<double> epsilon_bar;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Scenario {
  NetworkGraph network;
  AllocationGrid grid;
  // Whether the grid was written as one shared {values, default} block.
  bool uniform_grid = true;
  BidProfile bids;
  std::vector<BidSource> bid_sources;
  std::optional<BidProfile> truth;
  std::vector<BidSource> truth_sources;
  ExperimentConfig experiments;
};

// Throws ScenarioError listing every problem found, each with a line.
Scenario ParseScenario(std::string_view text, const std::string& origin = "<memory>");
Scenario LoadScenario(const std::filesystem::path& path);

nlohmann::json SaveScenario(const Scenario& scenario);

// FNV-1a of the saved document, 16 hex digits.
std::string ScenarioDigest(const Scenario& scenario);

}  // namespace rxmarket

#endif  // RXMARKET_SCENARIO_H_
