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


// Command dispatch for the rxmarket tool, kept in a library so tests can
// drive it without spawning processes.

#ifndef RXMARKET_TOOLS_CLI_H_
#define RXMARKET_TOOLS_CLI_H_

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rxmarket/coalition.h"
#include "rxmarket/scenario.h"

namespace rxmarket::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvalid = 3;

// `args` excludes the program name. Human-readable output goes to `out`,
// diagnostics to `err`.
int Run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

// The bundled triangle scenario.
Scenario CaseStudyScenario();

struct ReferenceCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool ok() const;
};

// Runs every mechanism on `scenario` and compares with the embedded
// reference numbers for the bundled case.
std::vector<ReferenceCheck> CheckCaseStudy(const Scenario& scenario,
                                           const LeastCoreOptions& options = {});

}  // namespace rxmarket::cli

#endif  // RXMARKET_TOOLS_CLI_H_
