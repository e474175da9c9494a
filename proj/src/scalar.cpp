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

#include "twistlab/scalar.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "twistlab/errors.hpp"

namespace twistlab {
namespace {

using i128 = __int128;

Truth band(long double diff) {
  if (std::fabs(diff) <= kEta) return Truth::Indeterminate;
  return diff < 0 ? Truth::True : Truth::False;
}

template <class F>
std::optional<Rational> try_exact(F&& f) {
  try {
    return f();
  } catch (const ResourceError&) {
    return std::nullopt;
  }
}

}  // namespace

const char* to_string(Truth t) {
  switch (t) {
    case Truth::False:
      return "false";
    case Truth::True:
      return "true";
    case Truth::Indeterminate:
      return "indeterminate";
  }
  return "?";
}

std::optional<Scalar> Scalar::parse(std::string_view text) {
  if (auto r = Rational::parse(text)) return Scalar(*r);
  std::string buf(text);
  char* end = nullptr;
  long double v = std::strtold(buf.c_str(), &end);
  if (end == buf.c_str() || *end != '\0' || !std::isfinite(v)) return std::nullopt;
  return Scalar::approx(v);
}

Scalar Scalar::from_double(double v) {
  if (!std::isfinite(v)) return Scalar::approx(v);
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec == std::errc{}) {
    if (auto r = Rational::parse(std::string_view(buf, ptr - buf))) {
      // Only accept the decimal if it round-trips to the same double.
      if (static_cast<double>(r->to_long_double()) == v) return Scalar(*r);
    }
  }
  return Scalar::approx(v);
}

std::string Scalar::str() const {
  if (exact_) return exact_->str();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", value_);
  return buf;
}

Scalar Scalar::operator*(const Scalar& o) const {
  if (exact_ && o.exact_) {
    if (auto r = try_exact([&] { return *exact_ * *o.exact_; })) return Scalar(*r);
  }
  return approx(value_ * o.value_);
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (exact_ && o.exact_ && o.exact_->num() != 0) {
    if (auto r = try_exact([&] { return *exact_ / *o.exact_; })) return Scalar(*r);
  }
  return approx(value_ / o.value_);
}

Scalar Scalar::operator+(const Scalar& o) const {
  if (exact_ && o.exact_) {
    if (auto r = try_exact([&] { return *exact_ + *o.exact_; })) return Scalar(*r);
  }
  return approx(value_ + o.value_);
}

Scalar Scalar::operator-(const Scalar& o) const {
  if (exact_ && o.exact_) {
    if (auto r = try_exact([&] { return *exact_ - *o.exact_; })) return Scalar(*r);
  }
  return approx(value_ - o.value_);
}

Scalar Scalar::pow_int(int e) const {
  if (exact_ && (e >= 0 || exact_->num() != 0)) {
    if (auto r = try_exact([&] { return exact_->pow(e); })) return Scalar(*r);
  }
  return approx(std::pow(value_, static_cast<long double>(e)));
}

Scalar Scalar::pow(const Scalar& e) const {
  if (e.is_exact() && e.rational().is_integer() && std::llabs(e.rational().num()) <= 4096) {
    return pow_int(static_cast<int>(e.rational().num()));
  }
  return approx(std::pow(value_, e.value_));
}

Truth less(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() < b.rational() ? Truth::True : Truth::False;
  return band(a.value() - b.value());
}

Truth less_equal(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a.rational() <= b.rational() ? Truth::True : Truth::False;
  long double diff = a.value() - b.value();
  if (std::fabs(diff) <= kEta) return Truth::Indeterminate;
  return diff < 0 ? Truth::True : Truth::False;
}

Threshold Threshold::from(const Scalar& s) {
  Threshold t;
  t.value = s.value();
  if (s.is_exact()) {
    t.exact = true;
    t.num = s.rational().num();
    t.den = s.rational().den();
  }
  return t;
}

Truth abs_less(const Residual& r, const Threshold& t) {
  if (r.exact && t.exact) {
    i128 lhs = i128{r.num < 0 ? -r.num : r.num} * t.den;
    i128 rhs = i128{t.num} * r.den;
    return lhs < rhs ? Truth::True : Truth::False;
  }
  return band(std::fabs(r.value) - t.value);
}

Truth abs_less_equal(const Residual& r, const Threshold& t) {
  if (r.exact && t.exact) {
    i128 lhs = i128{r.num < 0 ? -r.num : r.num} * t.den;
    i128 rhs = i128{t.num} * r.den;
    return lhs <= rhs ? Truth::True : Truth::False;
  }
  return band(std::fabs(r.value) - t.value);
}

}  // namespace twistlab
