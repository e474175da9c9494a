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

#ifndef TWISTLAB_SCALAR_HPP
#define TWISTLAB_SCALAR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "twistlab/rational.hpp"

namespace twistlab {

// Global comparison tolerance for float-mode strict inequalities.
inline constexpr long double kEta = 1e-12L;

// Outcome of a strict comparison. Indeterminate means the two sides were
// within kEta of each other and neither was exact.
enum class Truth : std::uint8_t { False = 0, True = 1, Indeterminate = 2 };

inline Truth operator&&(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::Indeterminate || b == Truth::Indeterminate) return Truth::Indeterminate;
  return Truth::True;
}
inline Truth operator!(Truth a) {
  if (a == Truth::Indeterminate) return a;
  return a == Truth::True ? Truth::False : Truth::True;
}
const char* to_string(Truth t);

// A real number carried as a long double, together with its exact rational
// value whenever one is known.
class Scalar {
 public:
  Scalar() = default;
  Scalar(Rational r) : value_(r.to_long_double()), exact_(r) {}  // NOLINT
  static Scalar approx(long double v) {
    Scalar s;
    s.value_ = v;
    return s;
  }
  static Scalar integer(std::int64_t v) { return Scalar(Rational(v)); }

  // Decimal or a/b text becomes exact; anything else parseable by strtold is
  // stored as an approximation.
  static std::optional<Scalar> parse(std::string_view text);

  // Recovers the exact decimal a double was written from (shortest round-trip
  // representation), falling back to an approximation.
  static Scalar from_double(double v);

  long double value() const { return value_; }
  bool is_exact() const { return exact_.has_value(); }
  const Rational& rational() const { return *exact_; }
  const std::optional<Rational>& exact() const { return exact_; }

  std::string str() const;

  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;

  // Exact when the base is exact and the result fits; otherwise approximate.
  Scalar pow_int(int e) const;
  // Exact for an exact base and an exact integral exponent.
  Scalar pow(const Scalar& e) const;

 private:
  long double value_ = 0;
  std::optional<Rational> exact_;
};

// Strict a < b, with the kEta indeterminate band when either side is inexact.
Truth less(const Scalar& a, const Scalar& b);
// a <= b, same band semantics.
Truth less_equal(const Scalar& a, const Scalar& b);

// Compact threshold for hot loops: an exact positive fraction num/den or a
// float value.
struct Threshold {
  long double value = 0;
  bool exact = false;
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Threshold from(const Scalar& s);
};

// One row of A q - b - p with p the nearest integer. Exact residuals are
// num/den.
struct Residual {
  std::int64_t p = 0;
  long double value = 0;
  bool exact = false;
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// |r| < t (strict) or |r| <= t (inclusive), honest about the kEta band.
Truth abs_less(const Residual& r, const Threshold& t);
Truth abs_less_equal(const Residual& r, const Threshold& t);

}  // namespace twistlab

#endif  // TWISTLAB_SCALAR_HPP
