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
#include "twistlab/core.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/io.hpp"
#include "twistlab/rational.hpp"
#include "twistlab/scalar.hpp"

using namespace twistlab;

namespace {

WeightVector weights(std::initializer_list<const char*> xs) {
  std::vector<Scalar> v;
  for (const char* x : xs) v.push_back(*Scalar::parse(x));
  return WeightVector(v);
}

}  // namespace

TEST_CASE("rational arithmetic is exact and normalized") {
  const Rational a(1, 3), b(2, 6);
  CHECK(a == b);
  CHECK((a + Rational(1, 6)) == Rational(1, 2));
  CHECK((a * Rational(3)) == Rational(1));
  CHECK(Rational(-4, -8) == Rational(1, 2));
  CHECK(Rational::parse("0.125").value() == Rational(1, 8));
  CHECK(Rational::parse("-7/21").value() == Rational(-1, 3));
  CHECK_FALSE(Rational::parse("abc").has_value());
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK_THROWS_AS(Rational(1, 0), UsageError);
}

TEST_CASE("scalar parsing keeps decimals exact") {
  CHECK(Scalar::parse("0.4")->is_exact());
  CHECK(Scalar::parse("0.4")->rational() == Rational(2, 5));
  CHECK(Scalar::from_double(0.1).rational() == Rational(1, 10));
  CHECK(Scalar::parse("1/3")->str() == "1/3");
}

TEST_CASE("truth comparisons report the indeterminate band") {
  CHECK(less(Scalar::integer(1), Scalar::integer(2)) == Truth::True);
  CHECK(less(Scalar::integer(2), Scalar::integer(2)) == Truth::False);
  CHECK(less_equal(Scalar::integer(2), Scalar::integer(2)) == Truth::True);
  const Scalar x = Scalar::approx(0.5L);
  CHECK(less(x, Scalar::approx(0.5L + 1e-14L)) == Truth::Indeterminate);
  CHECK(less(x, Scalar::approx(0.6L)) == Truth::True);
}

TEST_CASE("weight vectors validate positivity and the sum") {
  CHECK_NOTHROW(weights({"0.5", "1.5"}));
  CHECK_NOTHROW(weights({"1/3", "5/3"}));
  CHECK_THROWS_AS(weights({"0.5", "1"}), UsageError);
  CHECK_THROWS_AS(weights({"0", "2"}), UsageError);
  CHECK_THROWS_AS(weights({"-1", "3"}), UsageError);
  CHECK(WeightVector::uniform(3).size() == 3);
}

TEST_CASE("quasi_norm examples") {
  const std::vector<long double> x1{0.25L};
  CHECK(quasi_norm(x1, WeightVector::uniform(1)) == doctest::Approx(0.25));
  const std::vector<long double> x2{0.25L, 0.125L};
  CHECK(static_cast<double>(quasi_norm(x2, weights({"0.5", "1.5"}))) == doctest::Approx(0.25).epsilon(1e-12));
  const std::vector<long double> zero{0, 0};
  CHECK(quasi_norm(zero, weights({"0.5", "1.5"})) == 0);
  CHECK_THROWS_AS(quasi_norm(x1, WeightVector::uniform(2)), UsageError);
}

TEST_CASE("quasi_norm with unit weights is the sup norm") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + rng() % 4;
    std::vector<long double> x(d);
    long double sup = 0;
    for (auto& v : x) {
      v = u(rng);
      sup = std::max(sup, std::fabs(v));
    }
    REQUIRE(quasi_norm(x, WeightVector::uniform(d)) == sup);
  }
}

TEST_CASE("quasi_norm is monotone in each coordinate") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 5);
  const auto w = weights({"0.25", "1", "1.75"});
  for (int t = 0; t < 500; ++t) {
    std::vector<long double> x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = u(rng);
      y[i] = x[i] + u(rng);
      if (rng() % 2) x[i] = -x[i];
    }
    REQUIRE(quasi_norm(x, w) <= quasi_norm(y, w));
  }
}

TEST_CASE("nearest_residual examples") {
  const auto a = parse_matrix_text("1 1\n0.7\n");
  const std::vector<std::int64_t> q1{1};
  auto r = nearest_residual(a, q1);
  CHECK(r.p[0] == 1);
  CHECK(static_cast<double>(r.residuals[0].value) == doctest::Approx(-0.3));

  const auto half = parse_matrix_text("1 1\n0.5\n");
  r = nearest_residual(half, q1);
  CHECK(r.p[0] == 1);
  CHECK(static_cast<double>(r.residuals[0].value) == doctest::Approx(-0.5));

  const auto half_exact = parse_matrix_text("1 1\n1/2\n");
  const std::vector<std::int64_t> qm{-1};
  r = nearest_residual(half_exact, qm);
  CHECK(r.p[0] == -1);
  CHECK(r.residuals[0].exact);
  CHECK(r.residuals[0].num * 2 == r.residuals[0].den);

  const auto phi = preset_matrix("golden");
  const std::vector<std::int64_t> q5{5};
  r = nearest_residual(phi, q5);
  CHECK(r.p[0] == 8);
  CHECK(static_cast<double>(r.residuals[0].value) == doctest::Approx(0.0901699437).epsilon(1e-9));
}

TEST_CASE("nearest_residual reconstructs A q on random matrices") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 3, m = 1 + rng() % 3;
    std::vector<long double> e(n * m);
    for (auto& x : e) x = u(rng);
    const auto a = MatrixSpec::floating(n, m, e, 17);
    std::vector<std::int64_t> q(m);
    for (auto& x : q) x = static_cast<std::int64_t>(rng() % 2001) - 1000;
    const auto r = nearest_residual(a, q);
    for (std::size_t i = 0; i < n; ++i) {
      long double aq = 0;
      for (std::size_t j = 0; j < m; ++j) aq += e[i * m + j] * q[j];
      REQUIRE(std::fabs(aq - (r.p[i] + r.residuals[i].value)) <= 1e-9L);
      REQUIRE(std::fabs(r.residuals[i].value) <= 0.5L + 1e-12L);
      REQUIRE(r.p[i] == oracle::round_half_away(aq));
    }
  }
}

TEST_CASE("exact residuals for random rational matrices") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 2, m = 1 + rng() % 3;
    std::vector<Rational> e;
    for (std::size_t k = 0; k < n * m; ++k) {
      e.emplace_back(static_cast<std::int64_t>(rng() % 41) - 20, 1 + static_cast<std::int64_t>(rng() % 12));
    }
    const auto a = MatrixSpec::exact(n, m, e);
    std::vector<std::int64_t> q(m);
    for (auto& x : q) x = static_cast<std::int64_t>(rng() % 201) - 100;
    const auto r = nearest_residual(a, q);
    for (std::size_t i = 0; i < n; ++i) {
      Rational aq(0);
      for (std::size_t j = 0; j < m; ++j) aq += e[i * m + j] * Rational(q[j]);
      const Rational res = aq - Rational(r.p[i]);
      REQUIRE(r.residuals[i].exact);
      REQUIRE(Rational(r.residuals[i].num, r.residuals[i].den) == res);
      REQUIRE(res.abs() <= Rational(1, 2));
    }
  }
}

TEST_CASE("eval_tuple examples") {
  const auto p = ApproxTuple::power_law(1, 1, 2);
  CHECK(eval_tuple(p, 2)[0] == doctest::Approx(0.25));
  const auto q = ApproxTuple::power_law(2, 1, 0.5);
  CHECK(static_cast<double>(eval_tuple(q, 1024)[1]) == doctest::Approx(std::pow(2.0, -5)));
  const auto tab = parse_psi("tab:1=0.5,2=0.25", 1);
  CHECK(eval_tuple(tab, 1.5)[0] == doctest::Approx(0.5));
  CHECK(eval_tuple(tab, 2)[0] == doctest::Approx(0.25));
  CHECK(eval_tuple(tab, 100)[0] == doctest::Approx(0.25));
  CHECK_THROWS_AS(eval_tuple(p, 0), UsageError);
  CHECK_THROWS_AS(parse_psi("tab:1=0.25,2=0.5", 1), UsageError);
  CHECK_THROWS_AS(parse_psi("tab:1=0.5,3=0.25", 1), UsageError);
  CHECK_THROWS_AS(parse_psi("pow:-1,2", 1), UsageError);
}

TEST_CASE("rect_contains examples") {
  const std::vector<long double> x1{0.02L};
  CHECK(rect_contains(TorusRectangle({0.95L}, {0.1L}), x1));
  const std::vector<long double> x2{0.61L};
  CHECK_FALSE(rect_contains(TorusRectangle({0.5L}, {0.1L}), x2));
  const std::vector<long double> x3{0.55L, 0.52L};
  CHECK_FALSE(rect_contains(TorusRectangle({0.5L, 0.5L}, {0.2L, 0.01L}), x3));
}

TEST_CASE("rect_contains is invariant under integer translation") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 1000; ++t) {
    const TorusRectangle r({u(rng), u(rng)}, {0.3 * u(rng), 0.3 * u(rng)});
    std::vector<long double> x{u(rng), u(rng)};
    const bool base = rect_contains(r, x);
    std::vector<long double> y{x[0] + static_cast<int>(rng() % 7) - 3, x[1] + static_cast<int>(rng() % 7) - 3};
    REQUIRE(rect_contains(r, y) == base);
  }
}

TEST_CASE("matrix loading") {
  const auto phi = load_matrix("golden");
  CHECK(phi.rows() == 1);
  CHECK_FALSE(phi.is_exact());
  CHECK(phi.precision_digits() >= 30);
  const auto third = parse_matrix_text("1 1\n1/3\n");
  CHECK(third.is_exact());
  CHECK(third.entry(0, 0).rational() == Rational(1, 3));
  CHECK_THROWS_AS(parse_matrix_text("2 2\n1/2 0.5\n1 1\n"), UsageError);
  CHECK_THROWS_AS(parse_matrix_text("1 2\n1\n"), UsageError);
  CHECK_THROWS_AS(load_matrix("no-such-preset"), UsageError);
  const auto row = load_matrix("sqrt2-sqrt3-row");
  CHECK(row.rows() == 1);
  CHECK(row.cols() == 2);
  const auto rr1 = load_matrix("rand-rational(7,2,3,10)");
  const auto rr2 = load_matrix("rand-rational(7,2,3,10)");
  CHECK(rr1.is_exact());
  CHECK(rr1.entry(1, 2).rational() == rr2.entry(1, 2).rational());
  CHECK(load_matrix("liouville-like").rows() == 1);
  const auto inline_m = load_matrix("1/2,1/3;1/5,1/7");
  CHECK(inline_m.rows() == 2);
  CHECK(inline_m.is_exact());
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_matrix_text("2 2\n1/2 1/3\n1/4 0.5\n");
    FAIL("expected a usage error");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("ball_bounds match the exact coordinate oracle") {
  std::mt19937_64 rng(16);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + rng() % 3;
    const auto w = oracle::random_weights(rng, m, 4);
    const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 3);
    const std::int64_t num = 1 + static_cast<std::int64_t>(rng() % (16 * den));
    std::vector<Scalar> ex;
    for (auto c : w.c) ex.emplace_back(Rational(c, w.den));
    const WeightVector wv(ex);
    for (bool strict : {true, false}) {
      const auto b = ball_bounds(wv, Scalar(Rational(num, den)), strict);
      for (std::size_t j = 0; j < m; ++j) {
        // b_j is the largest k with k^{1/alpha_j} (<, <=) N.
        const int at = oracle::compare_coordinate(b[j], w.c[j], w.den, num, den);
        const int above = oracle::compare_coordinate(b[j] + 1, w.c[j], w.den, num, den);
        if (b[j] > 0) REQUIRE((strict ? at < 0 : at <= 0));
        REQUIRE((strict ? above >= 0 : above > 0));
      }
    }
  }
}
