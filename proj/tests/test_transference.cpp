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
#include "twistlab/transference.hpp"

using namespace twistlab;

namespace {

Scalar S(const char* text) { return *Scalar::parse(text); }
std::vector<Scalar> L(std::initializer_list<const char*> xs) {
  std::vector<Scalar> v;
  for (const char* x : xs) v.push_back(S(x));
  return v;
}
const WeightVector kOne = WeightVector::uniform(1);

double D(const Scalar& s) { return static_cast<double>(s.value()); }

}  // namespace

TEST_CASE("compute_c1 examples") {
  CHECK(D(compute_c1(S("1/4"), S("4"), L({"1"}), L({"1"}))) == doctest::Approx(1.0));
  CHECK(compute_c1(S("1/4"), S("4"), L({"1"}), L({"1"})).rational() == Rational(1));
  CHECK(compute_c1(S("0.5"), S("1"), L({"1"}), L({"1"})).rational() == Rational(3, 2));
  CHECK(compute_c1(S("0.5"), S("1"), L({"0.5"}), L({"1"})).rational() == Rational(9, 4));
}

TEST_CASE("compute_c2 examples") {
  CHECK(compute_c2(S("1"), L({"1"}), L({"1"})).rational() == Rational(1));
  CHECK(compute_c2(S("0.4"), L({"1"}), L({"1"})).rational() == Rational(7, 4));
  CHECK(compute_c2(S("0.4"), L({"1"}), L({"0.5", "1.5"})).rational() == Rational(49, 16));
}

TEST_CASE("constants are at least one and decrease in their arguments") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  const auto v = L({"0.5", "1.5"});
  const auto a = L({"1"});
  for (int t = 0; t < 200; ++t) {
    const double c = u(rng), c2 = c * u(rng);
    const double big_n = 1 / c;
    // C^{-n} N^{-m} >= 1 holds for C N^{m/n} <= 1; here n = 2, m = 1.
    const auto k1 = compute_c1(Scalar::from_double(c), Scalar::from_double(big_n * 0.5), v, a);
    const auto k2 = compute_c1(Scalar::from_double(c2), Scalar::from_double(big_n * 0.5), v, a);
    REQUIRE(k1.value() >= 1);
    REQUIRE(k2.value() >= k1.value() - 1e-12L);
    const double e = u(rng), e2 = e * u(rng);
    const auto d1 = compute_c2(Scalar::from_double(e), v, a);
    const auto d2 = compute_c2(Scalar::from_double(e2), v, a);
    REQUIRE(d1.value() >= 1);
    REQUIRE(d2.value() >= d1.value() - 1e-12L);
  }
}

TEST_CASE("homogeneous_empty examples") {
  const auto phi = preset_matrix("golden");
  CHECK(homogeneous_empty(phi, kOne, kOne, S("0.05"), S("8")) == Truth::True);
  CHECK(homogeneous_empty(phi, kOne, kOne, S("1.5"), S("8")) == Truth::False);
  const auto w2 = WeightVector::uniform(2);
  CHECK(homogeneous_empty(load_matrix("sqrt2-sqrt3-row"), kOne, w2, S("1.5"), S("2")) == Truth::False);
  CHECK(homogeneous_empty(parse_matrix_text("1 1\n1/3\n"), kOne, kOne, S("0.01"), S("4")) == Truth::False);
}

TEST_CASE("inhomogeneous_solve examples") {
  const auto phi = preset_matrix("golden");
  auto r = inhomogeneous_solve(phi, kOne, L({"0.5"}), L({"0.0875"}), S("14"));
  REQUIRE(r.found == Truth::True);
  CHECK(r.witness->q[0] == 4);
  CHECK(r.witness->p[0] == 6);
  CHECK(std::fabs(static_cast<double>(r.witness->residuals[0])) == doctest::Approx(0.0279).epsilon(0.01));

  r = inhomogeneous_solve(parse_matrix_text("1 1\n1/3\n"), kOne, L({"0"}), L({"0.01"}), S("4"));
  REQUIRE(r.found == Truth::True);
  CHECK(r.witness->q[0] == 3);
  CHECK(r.witness->p[0] == 1);

  r = inhomogeneous_solve(phi, kOne, L({"0.5"}), L({"0.000001"}), S("4"));
  CHECK(r.found == Truth::False);
  CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("inhomogeneous_solve budget counts the points scanned before a witness") {
  const auto phi = preset_matrix("golden");
  // q = 4 sits at rank 7 of the order 0, 1, -1, 2, -2, 3, -3, 4.
  for (unsigned workers : {1u, 4u}) {
    const auto r = inhomogeneous_solve(phi, kOne, L({"0.5"}), L({"0.0875"}), S("1000"), {}, Exec{workers, 8});
    REQUIRE(r.found == Truth::True);
    CHECK(r.witness->q[0] == 4);
    CHECK_THROWS_AS(inhomogeneous_solve(phi, kOne, L({"0.5"}), L({"0.0875"}), S("1000"), {}, Exec{workers, 7}),
                    ResourceError);
  }
  CHECK_THROWS_AS(inhomogeneous_solve(phi, kOne, L({"0.5"}), L({"0.000001"}), S("1000"), {}, Exec{1, 100}),
                  ResourceError);
}

TEST_CASE("inhomogeneous_solve finds q = 0 for a shift at an integer point") {
  const auto r = inhomogeneous_solve(preset_matrix("golden"), kOne, L({"2"}), L({"0.01"}), S("3"));
  REQUIRE(r.found == Truth::True);
  CHECK(r.witness->q[0] == 0);
  CHECK(r.witness->p[0] == -2);
}

TEST_CASE("verify_transference examples") {
  const auto phi = preset_matrix("golden");
  auto shifts = sample_shifts(1, 100, 7);
  auto rep = verify_transference(phi, kOne, kOne, S("0.05"), S("8"), shifts);
  CHECK(rep.passes == 100);
  CHECK(rep.failures == 0);
  CHECK(rep.indeterminate == 0);
  for (const auto& c : rep.checks) {
    REQUIRE(c.witness.has_value());
    // Independent re-check of the witness.
    const long double x = c.witness->q[0] * ((1 + std::sqrt(5.0L)) / 2) - c.b[0];
    REQUIRE(oracle::dist_z(x) <= rep.radii[0].value() + 1e-12L);
    REQUIRE(std::fabs(static_cast<long double>(c.witness->q[0])) < rep.norm_bound.value());
  }

  // A shift hit exactly by a known q.
  const std::vector<std::vector<double>> exact{{std::fmod(3 * 1.6180339887498949, 1.0)}};
  rep = verify_transference(phi, kOne, kOne, S("0.05"), S("8"), exact);
  CHECK(rep.passes == 1);

  rep = verify_transference(preset_matrix("sqrt2"), kOne, kOne, S("0.1"), S("4"), sample_shifts(1, 100, 8));
  CHECK(rep.passes == 100);

  CHECK_THROWS_AS(verify_transference(phi, kOne, kOne, S("1.5"), S("8"), shifts), UsageError);
}

TEST_CASE("verify_transference round trip on random float matrices") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0, 1);
  int tried = 0;
  for (int t = 0; t < 12; ++t) {
    const std::size_t n = 1 + rng() % 2, m = 1 + rng() % 2;
    std::vector<long double> e(n * m);
    for (auto& x : e) x = u(rng);
    const auto a = MatrixSpec::floating(n, m, e, 17);
    const auto v = WeightVector::uniform(n);
    const auto al = WeightVector::uniform(m);
    const Scalar big_n = Scalar::integer(2 + static_cast<std::int64_t>(rng() % 4));
    // Largest C with an empty system is min over 0 < |q| < N of the max row residual.
    long double cmin = 1;
    oracle::RationalWeights ow{std::vector<std::int64_t>(m, 1), 1};
    for (const auto& q : oracle::filtered_box(ow, static_cast<std::int64_t>(big_n.value()), 1, true)) {
      long double worst = 0;
      for (std::size_t i = 0; i < n; ++i) {
        long double aq = 0;
        for (std::size_t j = 0; j < m; ++j) aq += e[i * m + j] * q[j];
        worst = std::max(worst, oracle::dist_z(aq));
      }
      cmin = std::min(cmin, worst);
    }
    const Scalar c = Scalar::from_double(static_cast<double>(cmin * 0.9L));
    if (homogeneous_empty(a, v, al, c, big_n) != Truth::True) continue;
    ++tried;
    const auto rep = verify_transference(a, v, al, c, big_n, sample_shifts(n, 20, 100 + t));
    REQUIRE(rep.failures == 0);
    REQUIRE(rep.indeterminate == 0);
  }
  CHECK(tried >= 10);
}

TEST_CASE("level transference for the golden ratio") {
  const auto rep = verify_level_transference(preset_matrix("golden"), kOne, kOne, S("0.4"), 10, 20, 5);
  CHECK(rep.c2.rational() == Rational(7, 4));
  CHECK(rep.levels.size() == 10);
  CHECK(rep.failures == 0);
  for (const auto& l : rep.levels) {
    CHECK(l.passes == 20);
    CHECK(l.radii[0].value() == doctest::Approx(0.4 * 1.75 * std::ldexp(1.0, -l.level)));
    CHECK(l.norm_bound.value() == doctest::Approx(1.75 * std::ldexp(1.0, l.level)));
  }
}

TEST_CASE("sample_shifts is reproducible and uniform-looking") {
  const auto a = sample_shifts(2, 1000, 9);
  const auto b = sample_shifts(2, 1000, 9);
  CHECK(a == b);
  double mean = 0;
  for (const auto& x : a) {
    REQUIRE(x[0] >= 0);
    REQUIRE(x[0] < 1);
    mean += x[0];
  }
  CHECK(mean / 1000 == doctest::Approx(0.5).epsilon(0.1));
  CHECK(sample_shifts(2, 1000, 10) != a);
}
