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

// Seed derivation. One root seed drives everything; stream k gets
// splitmix64(root ^ splitmix64(k + 1)), so the values a task sees depend on
// its index only, never on which worker runs it.

#ifndef TWISTLAB_RANDOM_HPP
#define TWISTLAB_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace twistlab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  return splitmix64(root ^ splitmix64(stream + 1));
}

// Uniform on [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// `count` points uniform on [0,1)^n; point k uses its own derived stream.
inline std::vector<std::vector<double>> sample_torus_points(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (std::size_t k = 0; k < count; ++k) {
    std::mt19937_64 rng(derive_seed(seed, k));
    for (auto& x : out[k]) x = uniform01(rng);
  }
  return out;
}

}  // namespace twistlab

#endif  // TWISTLAB_RANDOM_HPP
