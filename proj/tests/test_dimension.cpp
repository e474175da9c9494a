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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "twistlab/dimension.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/io.hpp"

using namespace twistlab;

namespace {

Scalar S(const char* text) { return *Scalar::parse(text); }
std::vector<Scalar> L(std::initializer_list<const char*> xs) {
  std::vector<Scalar> v;
  for (const char* x : xs) v.push_back(S(x));
  return v;
}
Scalar R(std::int64_t p, std::int64_t q) { return Scalar(Rational(p, q)); }

// Closed form computed directly on rationals.
Rational formula(std::int64_t m, const std::vector<Rational>& tau) {
  std::optional<Rational> best;
  for (const auto& tj : tau) {
    Rational num(m);
    for (const auto& ti : tau) {
      if (tj > ti) num = num + (tj - ti);
    }
    const Rational d = num / tj;
    if (!best || d < *best) best = d;
  }
  return *best;
}

struct Instance {
  std::size_t m = 1;
  std::size_t n = 1;
  std::vector<Rational> tau;
};

// tau_j = m/n + k/den with k >= 1.
Instance random_instance(std::mt19937_64& rng, std::size_t max_dim = 4) {
  Instance x;
  x.m = 1 + rng() % max_dim;
  x.n = 1 + rng() % max_dim;
  const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 6);
  for (std::size_t j = 0; j < x.n; ++j) {
    const auto k = 1 + static_cast<std::int64_t>(rng() % 12);
    x.tau.push_back(Rational(static_cast<std::int64_t>(x.m), static_cast<std::int64_t>(x.n)) + Rational(k, den));
  }
  return x;
}

std::vector<Scalar> scalars(const std::vector<Rational>& r) {
  std::vector<Scalar> out;
  for (const auto& x : r) out.emplace_back(x);
  return out;
}

void check_partition(const DimensionReport& rep, std::size_t n) {
  for (const auto& row : rep.pivots) {
    std::vector<int> all;
    all.insert(all.end(), row.k1.begin(), row.k1.end());
    all.insert(all.end(), row.k2.begin(), row.k2.end());
    all.insert(all.end(), row.k3.begin(), row.k3.end());
    std::sort(all.begin(), all.end());
    REQUIRE(all.size() == n);
    for (std::size_t j = 0; j < n; ++j) REQUIRE(all[j] == static_cast<int>(j + 1));
  }
}

}  // namespace

TEST_CASE("dim_unweighted examples") {
  auto r = dim_unweighted(2, 2, L({"2", "2"}));
  CHECK(r.value.rational() == Rational(1));
  r = dim_unweighted(3, 2, L({"2", "4"}));
  CHECK(r.value.rational() == Rational(5, 4));
  CHECK(r.cross_check == std::optional<bool>(true));
  r = dim_unweighted(2, 2, L({"2", "3"}));
  CHECK(r.value.rational() == Rational(1));
  CHECK(r.mode == "unweighted");
}

TEST_CASE("dim_unweighted rejects tau_j <= m/n") {
  CHECK_THROWS_AS(dim_unweighted(2, 2, L({"1", "3"})), UsageError);
  CHECK_THROWS_AS(dim_unweighted(2, 2, L({"3"})), UsageError);
  try {
    dim_unweighted(4, 2, L({"3", "2"}));
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("tau_j > m/n") != std::string::npos);
  }
}

TEST_CASE("dim_weighted_2d examples") {
  auto r = dim_weighted_2d(2, L({"1", "1"}), L({"1.5", "2.5"}));
  CHECK(r.value.rational() == Rational(6, 5));
  REQUIRE(!r.conditions.empty());
  bool found = false;
  for (const auto& c : r.conditions) {
    if (c.lhs.is_exact() && c.lhs.rational() == Rational(2, 3)) {
      found = true;
      CHECK(c.rhs.rational() == Rational(1, 5));
      CHECK(c.holds);
    }
  }
  CHECK(found);

  r = dim_weighted_2d(2, L({"1", "1"}), L({"3", "3"}));
  CHECK(r.value.rational() == Rational(2, 3));

  try {
    dim_weighted_2d(2, L({"0.5", "1.5"}), L({"0.5", "3"}));
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    const std::string what = e.what();
    CHECK(what.find("1/3") != std::string::npos);
    CHECK(what.find("1/2") != std::string::npos);
  }
  CHECK_THROWS_AS(dim_weighted_2d(2, L({"1", "1"}), L({"0.5", "3"})), UsageError);
  // Beyond min(tau) = m the closed form exceeds the pivot P = min(tau).
  try {
    dim_weighted_2d(1, L({"1", "1"}), L({"2", "3"}));
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("m/min(tau) >=") != std::string::npos);
  }
}

TEST_CASE("mtprr_lower_bound examples") {
  auto r = mtprr_lower_bound(L({"1.5", "1.5"}), L({"0.5", "2.5"}));
  CHECK(r.value.rational() == Rational(5, 4));

  r = mtprr_lower_bound(L({"1", "1", "1"}), L({"0", "0", "0"}));
  CHECK(r.value.rational() == Rational(3));
  CHECK(r.pivots.size() == 1);

  r = mtprr_lower_bound(L({"1", "1"}), L({"0", "1"}));
  CHECK(r.value.rational() == Rational(3, 2));
  REQUIRE(r.pivots.size() == 2);
  CHECK(r.pivots[0].pivot.rational() == Rational(1));
  CHECK(r.pivots[0].k1 == std::vector<int>{1, 2});
  CHECK(r.pivots[0].d.rational() == Rational(2));
  CHECK(r.pivots[1].pivot.rational() == Rational(2));
  CHECK(r.pivots[1].k2 == std::vector<int>{1, 2});
  CHECK(r.pivots[1].d.rational() == Rational(3, 2));
  CHECK(r.argmin == 1);

  CHECK_THROWS_AS(mtprr_lower_bound(L({"0", "1"}), L({"1", "1"})), UsageError);
  CHECK_THROWS_AS(mtprr_lower_bound(L({"1", "1"}), L({"-1", "1"})), UsageError);
}

TEST_CASE("upper_cover_exponent examples") {
  CHECK(upper_cover_exponent(2, L({"2", "2"}), 1).rational() == Rational(1));
  CHECK(upper_cover_exponent(3, L({"2", "4"}), 2).rational() == Rational(5, 4));
  CHECK(upper_cover_exponent(1, L({"2"}), 1).rational() == Rational(1, 2));
  CHECK_THROWS_AS(upper_cover_exponent(1, L({"2"}), 2), UsageError);
}

TEST_CASE("closed form, pivot minimum and cover exponents coincide") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    const auto x = random_instance(rng);
    const auto tau = scalars(x.tau);
    const auto rep = dim_unweighted(x.m, x.n, tau);
    const Rational want = formula(static_cast<std::int64_t>(x.m), x.tau);
    REQUIRE(rep.value.rational() == want);

    std::vector<Scalar> a(x.n, R(static_cast<std::int64_t>(x.m), static_cast<std::int64_t>(x.n)));
    std::vector<Scalar> tt;
    for (const auto& tj : x.tau)
      tt.emplace_back(tj - Rational(static_cast<std::int64_t>(x.m), static_cast<std::int64_t>(x.n)));
    const auto piv = mtprr_lower_bound(a, tt);
    REQUIRE(piv.value.rational() == want);
    check_partition(piv, x.n);

    std::optional<Rational> cover;
    for (std::size_t j = 1; j <= x.n; ++j) {
      const Rational c = upper_cover_exponent(x.m, tau, j).rational();
      if (!cover || c < *cover) cover = c;
    }
    REQUIRE(*cover == want);
    REQUIRE(rep.value.value() > 0);
    REQUIRE(rep.value.value() <= static_cast<long double>(x.n));
  }
}

TEST_CASE("dimension is permutation invariant and non-increasing in tau") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 200; ++t) {
    auto x = random_instance(rng);
    const Rational base = dim_unweighted(x.m, x.n, scalars(x.tau)).value.rational();
    auto perm = x.tau;
    std::shuffle(perm.begin(), perm.end(), rng);
    REQUIRE(dim_unweighted(x.m, x.n, scalars(perm)).value.rational() == base);
    auto bigger = x.tau;
    const std::size_t i = rng() % x.n;
    bigger[i] = bigger[i] + Rational(1 + static_cast<std::int64_t>(rng() % 5), 3);
    REQUIRE(dim_unweighted(x.m, x.n, scalars(bigger)).value.rational() <= base);
  }
}

TEST_CASE("pivot partitions on random general instances") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<Scalar> a, tt;
    for (std::size_t j = 0; j < n; ++j) {
      a.push_back(R(1 + static_cast<std::int64_t>(rng() % 8), 1 + static_cast<std::int64_t>(rng() % 4)));
      tt.push_back(R(static_cast<std::int64_t>(rng() % 8), 1 + static_cast<std::int64_t>(rng() % 4)));
    }
    const auto rep = mtprr_lower_bound(a, tt);
    check_partition(rep, n);
    std::set<Rational> seen;
    for (const auto& row : rep.pivots) REQUIRE(seen.insert(row.pivot.rational()).second);
    for (const auto& row : rep.pivots) {
      REQUIRE(row.d.rational() >= rep.value.rational());
      for (int j : row.k1) REQUIRE(a[j - 1].rational() >= row.pivot.rational());
      for (int j : row.k2) REQUIRE(a[j - 1].rational() + tt[j - 1].rational() <= row.pivot.rational());
    }
    REQUIRE(rep.pivots[rep.argmin].d.rational() == rep.value.rational());
    REQUIRE(rep.value.value() > 0);
    REQUIRE(rep.value.value() <= static_cast<long double>(n));
  }
}

TEST_CASE("weighted formula with unit weights matches the unweighted one") {
  std::mt19937_64 rng(67);
  int agreed = 0;
  for (int t = 0; t < 400 && agreed < 100; ++t) {
    const auto m = static_cast<std::int64_t>(1 + rng() % 4);
    std::vector<Rational> tau;
    for (int j = 0; j < 2; ++j) {
      tau.push_back(Rational(m, 2) + Rational(1 + static_cast<std::int64_t>(rng() % 12), 4));
    }
    if (std::min(tau[0], tau[1]) > Rational(m) && tau[0] != tau[1]) {
      CHECK_THROWS_AS(dim_weighted_2d(static_cast<std::size_t>(m), L({"1", "1"}), scalars(tau)), UsageError);
      continue;
    }
    DimensionReport w;
    try {
      w = dim_weighted_2d(static_cast<std::size_t>(m), L({"1", "1"}), scalars(tau));
    } catch (const UsageError&) {
      continue;
    }
    const auto u = dim_unweighted(static_cast<std::size_t>(m), 2, scalars(tau));
    REQUIRE(w.value.rational() == u.value.rational());
    REQUIRE(w.cross_check == std::optional<bool>(true));
    ++agreed;
  }
  CHECK(agreed == 100);
}

TEST_CASE("box_dim_estimate with a full cover") {
  const auto rep = box_dim_estimate(preset_matrix("golden"), parse_psi("const:0.6", 1), WeightVector::uniform(1),
                                    S("16"), std::vector<double>{0.25, 0.125, 0.0625}, BoxCover::Union);
  CHECK(static_cast<double>(rep.slope) == doctest::Approx(1.0));
  for (const auto& c : rep.counts) CHECK(c.boxes == c.total);
}

TEST_CASE("box_dim_estimate for a single rectangle") {
  const auto z = MatrixSpec::zero(1, 1);
  // q = +-1 both land at 0 with radius 0.01.
  const auto rep =
      box_dim_estimate(z, parse_psi("const:0.01", 1), WeightVector::uniform(1), S("1"),
                       std::vector<double>{0.25, 0.125, 1.0 / 1024, 1.0 / 2048, 1.0 / 4096}, BoxCover::Union);
  REQUIRE(rep.counts.size() == 5);
  CHECK(rep.counts[0].boxes <= 2);
  CHECK(rep.counts[0].excluded);
  CHECK(rep.counts[4].boxes > rep.counts[3].boxes);
}

TEST_CASE("box_dim_estimate input checks") {
  const auto phi = preset_matrix("golden");
  const auto psi = parse_psi("pow:1,2", 1);
  const auto one = WeightVector::uniform(1);
  CHECK_THROWS_AS(box_dim_estimate(phi, psi, one, S("64"), std::vector<double>{0.125, 0.25}), UsageError);
  CHECK_THROWS_AS(box_dim_estimate(phi, psi, one, S("64"), std::vector<double>{0.3}), UsageError);
  Exec tight;
  tight.point_budget = 100;
  CHECK_THROWS_AS(box_dim_estimate(phi, psi, one, S("64"), std::vector<double>{1.0 / 1024}, BoxCover::Shell, tight),
                  ResourceError);
}

TEST_CASE("box dimension for the golden ratio with psi = r^-2") {
  std::vector<double> deltas;
  for (int k = 4; k <= 10; ++k) deltas.push_back(std::ldexp(1.0, -k));
  const auto rep =
      box_dim_estimate(preset_matrix("golden"), parse_psi("pow:1,2", 1), WeightVector::uniform(1), S("4096"), deltas);
  CHECK(std::fabs(static_cast<double>(rep.slope) - 0.5) <= 0.1);
  CHECK(rep.used >= 3);
}

TEST_CASE("weighted closed form agrees with the pivot minimum whenever admissible") {
  std::mt19937_64 rng(71);
  int admissible = 0;
  for (int t = 0; t < 400; ++t) {
    const auto m = static_cast<std::int64_t>(1 + rng() % 4);
    const Rational v1(1 + static_cast<std::int64_t>(rng() % 7), 4);
    const std::vector<Rational> v{v1, Rational(2) - v1};
    std::vector<Rational> tau;
    for (int i = 0; i < 2; ++i) {
      tau.push_back(v[i] * Rational(m, 2) + Rational(static_cast<std::int64_t>(rng() % 13), 4));
    }
    DimensionReport rep;
    try {
      rep = dim_weighted_2d(static_cast<std::size_t>(m), scalars(v), scalars(tau));
    } catch (const UsageError&) {
      continue;
    }
    ++admissible;
    REQUIRE(rep.cross_check == std::optional<bool>(true));
    for (const auto& c : rep.conditions) REQUIRE(c.holds);
    check_partition(rep, 2);
  }
  CHECK(admissible >= 100);
}
