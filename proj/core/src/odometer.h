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

#ifndef RXMARKET_SRC_ODOMETER_H_
#define RXMARKET_SRC_ODOMETER_H_

#include <cstddef>
#include <utility>
#include <vector>

namespace rxmarket {

// Mixed-radix counter; the last digit turns fastest, so digit vectors come
// out in lexicographic order. Use as `do { ... } while (odo.Next());`. With
// no digits it yields exactly one (empty) state.
class Odometer {
 public:
  explicit Odometer(std::vector<std::size_t> radices)
      : radices_(std::move(radices)), digits_(radices_.size(), 0) {}

  std::size_t digit(std::size_t p) const { return digits_[p]; }
  const std::vector<std::size_t>& digits() const { return digits_; }

  bool Next() {
    for (std::size_t p = digits_.size(); p-- > 0;) {
      if (++digits_[p] < radices_[p]) return true;
      digits_[p] = 0;
    }
    return false;
  }

 private:
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> digits_;
};

}  // namespace rxmarket

#endif  // RXMARKET_SRC_ODOMETER_H_
