// Copyright 2026 The twistlab Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWISTLAB_EXEC_HPP
#define TWISTLAB_EXEC_HPP

#include <cstdint>

namespace twistlab {

// Execution settings passed to every enumerating or estimating operation.
// Results never depend on `workers`: work is cut into a fixed number of
// chunks and merged in chunk order.
struct Exec {
  unsigned workers = 1;
  std::uint64_t point_budget = 100'000'000;
};

}  // namespace twistlab

#endif  // TWISTLAB_EXEC_HPP
