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

// Independent reference computations and random generators shared by the
// tests. Nothing here calls into the enumeration code under test.

#ifndef TWISTLAB_TESTS_ORACLES_HPP
#define TWISTLAB_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<std::int64_t>;

// Weights alpha_j = c_j / den with positive integers c_j summing to m * den.
struct RationalWeights {
  std::vector<std::int64_t> c;
  std::int64_t den = 1;
};

inline RationalWeights random_weights(std::mt19937_64& rng, std::size_t m, std::int64_t den) {
  RationalWeights w{std::vector<std::int64_t>(m, 1), den};
  std::int64_t left = static_cast<std::int64_t>(m) * den - static_cast<std::int64_t>(m);
  while (left > 0) {
    w.c[rng() % m] += 1;
    --left;
  }
  return w;
}

inline __int128 ipow(__int128 b, std::int64_t e) {
  __int128 r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// |k|^{1/alpha} compared against N = num/den, exactly:
// |k|^{1/alpha} < N  <=>  |k|^{c} * den^{D} < num^{D}  with alpha = c/D.
inline int compare_coordinate(std::int64_t k, std::int64_t c, std::int64_t d, std::int64_t num, std::int64_t den) {
  const __int128 lhs = ipow(k < 0 ? -k : k, d) * ipow(den, c);
  const __int128 rhs = ipow(num, c);
  return lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
}

// All nonzero q with |q|_alpha < N (strict) or <= N, in no particular order.
inline std::vector<Vec> filtered_box(const RationalWeights& w, std::int64_t num, std::int64_t den, bool strict,
                                     bool include_zero = false) {
  const std::size_t m = w.c.size();
  const double n_real = static_cast<double>(num) / static_cast<double>(den);
  std::vector<std::int64_t> bound(m);
  for (std::size_t j = 0; j < m; ++j) {
    bound[j] = static_cast<std::int64_t>(std::ceil(std::pow(n_real, static_cast<double>(w.c[j]) / w.den))) + 1;
  }
  std::vector<Vec> out;
  Vec q(m);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == m) {
      const bool zero = std::all_of(q.begin(), q.end(), [](std::int64_t x) { return x == 0; });
      if (zero && !include_zero) return;
      for (std::size_t i = 0; i < m; ++i) {
        const int c = compare_coordinate(q[i], w.c[i], w.den, num, den);
        if (strict ? c >= 0 : c > 0) return;
      }
      out.push_back(q);
      return;
    }
    for (std::int64_t k = -bound[j]; k <= bound[j]; ++k) {
      q[j] = k;
      rec(j + 1);
    }
  };
  rec(0);
  return out;
}

// prod_j (2 floor(N^{alpha_j}) + 1), with the floor found by exact search.
inline std::uint64_t closed_form_count(const RationalWeights& w, std::int64_t num, std::int64_t den) {
  std::uint64_t total = 1;
  for (std::size_t j = 0; j < w.c.size(); ++j) {
    std::int64_t k = 0;
    while (compare_coordinate(k + 1, w.c[j], w.den, num, den) <= 0) ++k;
    total *= static_cast<std::uint64_t>(2 * k + 1);
  }
  return total;
}

// Nearest integer with ties away from zero.
inline std::int64_t round_half_away(long double x) {
  return static_cast<std::int64_t>(x < 0 ? -std::floor(-x + 0.5L) : std::floor(x + 0.5L));
}

// Distance from x to the nearest integer.
inline long double dist_z(long double x) {
  const long double f = x - std::floor(x);
  return std::min(f, 1 - f);
}

// Continued fraction convergent denominators of a quadratic irrational given
// by its partial quotients.
inline std::vector<std::int64_t> convergent_denominators(const std::vector<int>& quotients) {
  std::vector<std::int64_t> q{1, static_cast<std::int64_t>(quotients.at(1))};
  for (std::size_t k = 2; k < quotients.size(); ++k) q.push_back(quotients[k] * q[k - 1] + q[k - 2]);
  return q;
}

// Integer part and partial quotients of x (long double accuracy).
inline std::vector<int> continued_fraction(long double x, int terms) {
  std::vector<int> a;
  for (int k = 0; k < terms; ++k) {
    const long double f = std::floor(x);
    a.push_back(static_cast<int>(f));
    x = 1 / (x - f);
  }
  return a;
}

}  // namespace oracle

#endif  // TWISTLAB_TESTS_ORACLES_HPP
