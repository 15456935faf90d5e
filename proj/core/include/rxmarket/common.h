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

#ifndef RXMARKET_COMMON_H_
#define RXMARKET_COMMON_H_

#include <stdexcept>
#include <string>
#include <utility>

namespace rxmarket {

inline constexpr char kVersion[] = "0.1.0";

// Absolute tolerance for money comparisons, feasibility and tie detection.
inline constexpr double kTolerance = 1e-9;

// Money values in euro.
using Money = double;

// Base error. `code()` is a short kebab-case tag ("unknown-area",
// "tuple-not-in-domain", ...) that callers and tests can match on.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace rxmarket

#endif  // RXMARKET_COMMON_H_
