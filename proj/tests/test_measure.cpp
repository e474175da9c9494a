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

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/io.hpp"
#include "twistlab/measure.hpp"

using namespace twistlab;

namespace {

Scalar S(const char* text) { return *Scalar::parse(text); }
std::vector<Scalar> L(std::initializer_list<const char*> xs) {
  std::vector<Scalar> v;
  for (const char* x : xs) v.push_back(S(x));
  return v;
}
const WeightVector kOne = WeightVector::uniform(1);
const long double kPhi = (1 + std::sqrt(5.0L)) / 2;

EstimatorConfig grid(double step) {
  EstimatorConfig e;
  e.method = Estimator::Grid;
  e.grid_step = step;
  return e;
}

EstimatorConfig monte_carlo(std::uint64_t samples, std::uint64_t seed) {
  EstimatorConfig e;
  e.method = Estimator::MonteCarlo;
  e.samples = samples;
  e.seed = seed;
  return e;
}

}  // namespace

TEST_CASE("dyadic_series examples") {
  std::vector<int> levels;
  for (int l = 1; l <= 10; ++l) levels.push_back(l);
  const auto div = dyadic_series(parse_psi("pow:1,1", 1), 1, levels, 10);
  REQUIRE(div.size() == 10);
  for (std::size_t k = 0; k < div.size(); ++k) CHECK(static_cast<double>(div[k]) == doctest::Approx(k + 1.0));
  const auto conv = dyadic_series(parse_psi("pow:1,2", 1), 1, levels, 10);
  CHECK(static_cast<double>(conv.back()) == doctest::Approx(1 - std::ldexp(1.0, -10)));
  CHECK(dyadic_series(parse_psi("pow:1,1", 1), 1, std::vector<int>{}, 10).empty());
  CHECK(dyadic_series(parse_psi("pow:1,1", 1), 1, levels, 3).size() == 3);
  CHECK_THROWS_AS(dyadic_series(parse_psi("pow:1,1", 1), 1, std::vector<int>{2, 2}, 3), UsageError);
}

TEST_CASE("radial_series examples") {
  CHECK(static_cast<double>(radial_series(parse_psi("pow:1,2", 1), 1, 100).back()) ==
        doctest::Approx(1.6349839).epsilon(1e-7));
  long double h = 0;
  for (int r = 1; r <= 100; ++r) h += 1.0L / r;
  CHECK(static_cast<double>(radial_series(parse_psi("pow:1,1", 1), 1, 100).back()) ==
        doctest::Approx(static_cast<double>(h)));
  CHECK(static_cast<double>(radial_series(parse_psi("const:1", 1), 1, 5).back()) == doctest::Approx(5));
  // m = 2 weights the product by r.
  CHECK(static_cast<double>(radial_series(parse_psi("pow:1,3", 1), 2, 100).back()) ==
        doctest::Approx(1.6349839).epsilon(1e-7));
  CHECK_THROWS_AS(radial_series(parse_psi("const:1", 1), 1, 0), UsageError);
}

TEST_CASE("partial sums are non-decreasing") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 50; ++t) {
    const double c = 0.1 + (rng() % 100) / 50.0, tau = 0.1 + (rng() % 40) / 10.0;
    const auto psi = ApproxTuple::power_law(1, c, tau);
    const auto s = radial_series(psi, 1 + rng() % 3, 200);
    for (std::size_t k = 1; k < s.size(); ++k) REQUIRE(s[k] >= s[k - 1]);
  }
}

TEST_CASE("growth_exponent separates linear from bounded sums") {
  std::vector<long double> lin, flat;
  for (int k = 1; k <= 64; ++k) {
    lin.push_back(k);
    flat.push_back(2 - std::exp2(-static_cast<long double>(k)));
  }
  CHECK(static_cast<double>(growth_exponent(lin)) == doctest::Approx(1.0));
  CHECK(std::fabs(static_cast<double>(growth_exponent(flat))) < 1e-6);
}

TEST_CASE("hypothesis_ratio") {
  // psi = eps r^{-1} with v = (1), m = n = 1 gives psi(r) r = eps.
  CHECK(static_cast<double>(hypothesis_ratio(parse_psi("pow:0.3,1", 1), kOne, 1, 10)) == doctest::Approx(0.3));
  CHECK(static_cast<double>(hypothesis_ratio(parse_psi("pow:1,0.5", 1), kOne, 1, 10)) == doctest::Approx(32));
}

TEST_CASE("borel_cantelli bound dominates the volume sum") {
  const auto rep = borel_cantelli(parse_psi("pow:1,2", 1), kOne, 8);
  CHECK(rep.shells == 8);
  CHECK(rep.constant > 0);
  CHECK(rep.volume_sum <= rep.bound);
  CHECK_THROWS_AS(borel_cantelli(parse_psi("pow:1,2", 1), kOne, 0), UsageError);
}

TEST_CASE("hit_count examples") {
  const auto phi = preset_matrix("golden");
  // Near misses of q phi against 0 are the Fibonacci numbers.
  const auto h = hit_count(L({"0"}), phi, parse_psi("pow:0.5,1", 1), kOne, S("100"), 100);
  int fib = 0;
  for (const auto& w : h.witnesses) {
    const long double x = w.q[0] * kPhi;
    CHECK(oracle::dist_z(x) < 0.5L / std::fabs(static_cast<long double>(w.q[0])));
    ++fib;
  }
  CHECK(h.count == static_cast<std::uint64_t>(fib));
  CHECK(h.count > 0);
  CHECK(hit_count(L({"0.5"}), phi, parse_psi("const:0.000001", 1), kOne, S("10")).count == 0);
  CHECK(hit_count(L({"0.5"}), phi, parse_psi("const:0.6", 1), kOne, S("10")).count == 20);
}

TEST_CASE("hit_count matches a brute force oracle") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 40; ++t) {
    const double x = u(rng), b = u(rng), c = 0.05 + u(rng);
    const auto a = MatrixSpec::floating(1, 1, {static_cast<long double>(x)}, 17);
    const std::vector<Scalar> bs{Scalar::from_double(b)};
    const auto psi = ApproxTuple::power_law(1, c, 1);
    const auto h = hit_count(bs, a, psi, kOne, S("60"));
    std::uint64_t want = 0;
    for (std::int64_t q = -60; q <= 60; ++q) {
      if (q == 0) continue;
      const long double lhs = oracle::dist_z(static_cast<long double>(x) * q - static_cast<long double>(b));
      want += lhs < c / std::fabs(static_cast<long double>(q));
    }
    REQUIRE(h.count + h.indeterminate >= want);
    REQUIRE(h.count <= want);
  }
}

TEST_CASE("limsup_measure extremes") {
  const auto phi = preset_matrix("golden");
  const auto cut = L({"4", "16"});
  auto e = limsup_measure(phi, parse_psi("const:0.6", 1), kOne, cut, grid(1e-3));
  REQUIRE(e.size() == 2);
  CHECK(e[0].value == 1);
  CHECK(e[1].value == 1);
  e = limsup_measure(phi, parse_psi("const:0.0000001", 1), kOne, cut, grid(1e-3));
  CHECK(static_cast<double>(e[1].value) < 0.01);
  CHECK_THROWS_AS(limsup_measure(phi, parse_psi("const:0.6", 1), kOne, std::vector<Scalar>{}, grid(1e-3)), UsageError);
}

TEST_CASE("limsup_measure is non-decreasing in Q") {
  const auto phi = preset_matrix("golden");
  const auto cut = L({"16", "64", "256", "1024"});
  for (const char* psi : {"pow:0.4,1", "pow:1,3", "pow:0.2,0.5"}) {
    for (const auto& est : {grid(1e-4), monte_carlo(20000, 3)}) {
      const auto e = limsup_measure(phi, parse_psi(psi, 1), kOne, cut, est, S("8"));
      for (std::size_t k = 1; k < e.size(); ++k) REQUIRE(e[k].value >= e[k - 1].value);
    }
  }
}

TEST_CASE("limsup_measure matches an interval union oracle in one dimension") {
  const auto phi = preset_matrix("golden");
  const auto e = limsup_measure(phi, parse_psi("pow:0.1,1", 1), kOne, L({"50"}), grid(1e-5));
  // Exact length of the union of open intervals (q phi - r, q phi + r) mod 1.
  std::vector<std::pair<long double, long double>> iv;
  for (int q = -50; q <= 50; ++q) {
    if (q == 0) continue;
    const long double c = q * kPhi - std::floor(q * kPhi), r = 0.1L / std::abs(q);
    for (int s = -1; s <= 1; ++s) iv.emplace_back(c - r + s, c + r + s);
  }
  std::sort(iv.begin(), iv.end());
  long double len = 0, lo = 0, hi = 0;
  bool open = false;
  for (auto [a, b] : iv) {
    a = std::max(a, 0.0L);
    b = std::min(b, 1.0L);
    if (b <= a) continue;
    if (open && a <= hi) {
      hi = std::max(hi, b);
    } else {
      if (open) len += hi - lo;
      lo = a;
      hi = b;
      open = true;
    }
  }
  if (open) len += hi - lo;
  CHECK(static_cast<double>(e[0].value) == doctest::Approx(static_cast<double>(len)).epsilon(0.002));
}

TEST_CASE("grid and Monte Carlo estimates agree") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0, 1);
  int within = 0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + t % 2;
    std::vector<long double> e(n);
    for (auto& x : e) x = u(rng);
    const auto a = MatrixSpec::floating(n, 1, e, 17);
    const auto psi = ApproxTuple::power_law(n, 0.2 + 0.3 * u(rng), 1.0 / n);
    const auto cut = L({"20"});
    const auto g = limsup_measure(a, psi, kOne, cut, grid(n == 1 ? 1e-5 : 2e-3));
    const auto mc = limsup_measure(a, psi, kOne, cut, monte_carlo(40000, 100 + t));
    REQUIRE(mc[0].half_width > 0);
    within +=
        std::fabs(static_cast<double>(g[0].value - mc[0].value)) <= 3 * static_cast<double>(mc[0].half_width) + 2e-3;
  }
  CHECK(within >= 19);
}

TEST_CASE("Monte Carlo estimates are reproducible per seed and worker count") {
  const auto phi = preset_matrix("golden");
  const auto cut = L({"16", "64"});
  const auto x = limsup_measure(phi, parse_psi("pow:0.4,1", 1), kOne, cut, monte_carlo(50000, 5), S("8"));
  const auto y =
      limsup_measure(phi, parse_psi("pow:0.4,1", 1), kOne, cut, monte_carlo(50000, 5), S("8"), Exec{8, 100'000'000});
  for (std::size_t k = 0; k < cut.size(); ++k) CHECK(x[k].value == y[k].value);
}

TEST_CASE("equidist_ratio matches a direct count") {
  const auto phi = preset_matrix("golden");
  const TorusRectangle box({0.125L}, {0.125L});
  const auto r = equidist_ratio(phi, kOne, box, S("1000"));
  std::uint64_t want = 0;
  for (int q = -1000; q <= 1000; ++q) {
    const long double x = q * kPhi - std::floor(q * kPhi);
    want += std::fabs(x - 0.125L) < 0.125L;
  }
  CHECK(r.total == 2001);
  CHECK(r.in_box == want);
  CHECK(static_cast<double>(r.ratio) == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("equidist_ratio is additive over disjoint boxes") {
  const auto a = load_matrix("sqrt2-sqrt3-row");
  const WeightVector alpha(L({"0.5", "1.5"}));
  // (0, 1/4) and (1/4, 1) miss only the point 1/4, which no orbit point hits.
  const auto left = equidist_ratio(a, alpha, TorusRectangle({0.125L}, {0.125L}), S("64"));
  const auto right = equidist_ratio(a, alpha, TorusRectangle({0.625L}, {0.375L}), S("64"));
  const auto all = equidist_ratio(a, alpha, TorusRectangle({0.5L}, {0.5L}), S("64"));
  CHECK(left.total == all.total);
  // The full open box misses x = 0 exactly; q = 0 lands there.
  CHECK(left.in_box + right.in_box == all.in_box);
}

TEST_CASE("equidist_ratio for the zero matrix") {
  const auto z = MatrixSpec::zero(1, 1);
  CHECK(equidist_ratio(z, kOne, TorusRectangle({0.0L}, {0.1L}), S("10")).ratio == 1);
  CHECK(equidist_ratio(z, kOne, TorusRectangle({0.5L}, {0.1L}), S("10")).ratio == 0);
}

TEST_CASE("ubiquity configuration for the golden ratio") {
  const auto phi = preset_matrix("golden");
  const auto cfg = make_ubiquity_config(phi, kOne, kOne, S("0.4"), 10);
  CHECK(cfg.c2.rational() == Rational(7, 4));
  // (2^{-3} eps^{-1} c2^{-2}) = 0.3125 / 3.0625.
  CHECK(cfg.c3_bound.rational() == Rational(5, 49));
  CHECK(cfg.c3.rational() == Rational(5, 98));
  CHECK(cfg.admissible);
  REQUIRE(cfg.size() == 10);
  CHECK(cfg.upper(0).rational() == Rational(7, 2));
  CHECK(static_cast<double>(cfg.rho_at(2)[0]) == doctest::Approx(0.4 * 1.75 / 8));
  CHECK(static_cast<double>(cfg.rho(0, 14)) == doctest::Approx(0.4 * 1.75 * 1.75 / 14));

  UbiquityOptions bad;
  bad.c3 = S("0.5");
  CHECK_THROWS_AS(make_ubiquity_config(phi, kOne, kOne, S("0.4"), 10, bad), UsageError);
  bad.allow_inadmissible = true;
  CHECK_FALSE(make_ubiquity_config(phi, kOne, kOne, S("0.4"), 10, bad).admissible);
}

TEST_CASE("ubiquity coverage for the golden ratio") {
  const auto phi = preset_matrix("golden");
  const auto cfg = make_ubiquity_config(phi, kOne, kOne, S("0.4"), 10);
  const TorusRectangle box({0.4L}, {0.1L});
  for (std::size_t k = 5; k < cfg.size(); ++k) {
    const auto c = ubiquity_coverage(phi, kOne, cfg, k, box, grid(1e-4));
    CHECK(c.resonant_points > 0);
    CHECK(static_cast<double>(c.fraction) >= 0.5);
  }
  CHECK_THROWS_AS(ubiquity_coverage(phi, kOne, cfg, 10, box, grid(1e-4)), UsageError);
}
