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

#include "twistlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "twistlab/errors.hpp"

namespace twistlab {
namespace {

using i128 = __int128;

constexpr i128 kResidualLimit = i128{1} << 100;

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  i128 l = i128{a} / std::gcd(a, b) * b;
  if (l > std::numeric_limits<std::int64_t>::max()) {
    throw ResourceError("common denominator of matrix row exceeds 64 bits");
  }
  return static_cast<std::int64_t>(l);
}

bool is_power_of_two(long double r) {
  if (!(r > 0) || !std::isfinite(r)) return false;
  int e = 0;
  long double m = std::frexp(r, &e);
  return m == 0.5L;
}

std::string fmt(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------- weights

WeightVector::WeightVector(std::vector<Scalar> exponents, long double tolerance) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw UsageError("weight vector must be non-empty");
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    const Scalar& e = exponents_[i];
    if (!(e.value() > 0) || !std::isfinite(e.value())) {
      throw UsageError("weight exponent " + std::to_string(i + 1) + " must be positive, got " + e.str());
    }
  }
  const auto d = static_cast<std::int64_t>(exponents_.size());
  if (all_exact()) {
    Rational sum(0);
    for (const auto& e : exponents_) sum += e.rational();
    if (sum != Rational(d)) {
      throw UsageError("weight exponents must sum to " + std::to_string(d) + ", got " + sum.str());
    }
  } else {
    long double sum = 0;
    for (const auto& e : exponents_) sum += e.value();
    if (std::fabs(sum - static_cast<long double>(d)) > tolerance) {
      throw UsageError("weight exponents must sum to " + std::to_string(d) + ", got " + fmt(sum));
    }
  }
}

WeightVector WeightVector::uniform(std::size_t d) { return WeightVector(std::vector<Scalar>(d, Scalar::integer(1))); }

long double WeightVector::min_value() const {
  long double m = exponents_.front().value();
  for (const auto& e : exponents_) m = std::min(m, e.value());
  return m;
}

long double WeightVector::max_value() const {
  long double m = exponents_.front().value();
  for (const auto& e : exponents_) m = std::max(m, e.value());
  return m;
}

bool WeightVector::all_exact() const {
  return std::all_of(exponents_.begin(), exponents_.end(), [](const Scalar& s) { return s.is_exact(); });
}

std::string WeightVector::str() const {
  std::string out;
  for (std::size_t i = 0; i < exponents_.size(); ++i) {
    if (i) out += ",";
    out += exponents_[i].str();
  }
  return out;
}

// ----------------------------------------------------------------- matrix

Residual RowForm::residual(std::span<const std::int64_t> q) const {
  Residual r;
  if (exact_) {
    i128 s = -i128{int_offset_};
    for (std::size_t j = 0; j < q.size(); ++j) s += i128{int_coeff_[j]} * q[j];
    if (s > kResidualLimit || s < -kResidualLimit) {
      throw ResourceError("exact residual exceeds 100-bit range");
    }
    const i128 d = den_;
    i128 p = s >= 0 ? (2 * s + d) / (2 * d) : -((-2 * s + d) / (2 * d));
    if (p > std::numeric_limits<std::int64_t>::max() || p < -std::numeric_limits<std::int64_t>::max()) {
      throw ResourceError("nearest integer exceeds 64 bits");
    }
    r.exact = true;
    r.p = static_cast<std::int64_t>(p);
    r.num = static_cast<std::int64_t>(s - p * d);
    r.den = den_;
    r.value = static_cast<long double>(r.num) / static_cast<long double>(r.den);
    return r;
  }
  long double v = -offset_;
  for (std::size_t j = 0; j < q.size(); ++j) v += coeff_[j] * static_cast<long double>(q[j]);
  r.p = std::llroundl(v);
  r.value = v - static_cast<long double>(r.p);
  return r;
}

MatrixSpec MatrixSpec::exact(std::size_t rows, std::size_t cols, std::vector<Rational> entries) {
  if (rows == 0 || cols == 0) throw UsageError("matrix must have at least one row and one column");
  if (entries.size() != rows * cols) throw UsageError("matrix entry count does not match shape");
  MatrixSpec a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.exact_ = true;
  a.exact_entries_ = std::move(entries);
  return a;
}

MatrixSpec MatrixSpec::floating(std::size_t rows, std::size_t cols, std::vector<long double> entries, int digits,
                                std::vector<std::string> source_text) {
  if (rows == 0 || cols == 0) throw UsageError("matrix must have at least one row and one column");
  if (entries.size() != rows * cols) throw UsageError("matrix entry count does not match shape");
  for (long double e : entries) {
    if (!std::isfinite(e)) throw UsageError("matrix entries must be finite");
  }
  if (!source_text.empty() && source_text.size() != entries.size()) {
    throw UsageError("matrix source text does not match entry count");
  }
  MatrixSpec a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.exact_ = false;
  a.digits_ = digits;
  a.float_entries_ = std::move(entries);
  a.source_ = std::move(source_text);
  return a;
}

MatrixSpec MatrixSpec::zero(std::size_t rows, std::size_t cols) {
  return exact(rows, cols, std::vector<Rational>(rows * cols, Rational(0)));
}

Scalar MatrixSpec::entry(std::size_t i, std::size_t j) const {
  if (exact_) return Scalar(exact_entries_[i * cols_ + j]);
  return Scalar::approx(float_entries_[i * cols_ + j]);
}

std::string MatrixSpec::entry_text(std::size_t i, std::size_t j) const {
  if (exact_) return exact_entries_[i * cols_ + j].str();
  if (!source_.empty()) return source_[i * cols_ + j];
  return fmt(float_entries_[i * cols_ + j]);
}

RowForm MatrixSpec::row_form(std::size_t i, const Scalar& shift) const {
  RowForm f;
  if (exact_ && shift.is_exact()) {
    try {
      std::int64_t d = shift.rational().den();
      for (std::size_t j = 0; j < cols_; ++j) d = lcm_checked(d, exact_entries_[i * cols_ + j].den());
      f.int_coeff_.resize(cols_);
      for (std::size_t j = 0; j < cols_; ++j) {
        const Rational& e = exact_entries_[i * cols_ + j];
        i128 c = i128{e.num()} * (d / e.den());
        if (c > std::numeric_limits<std::int64_t>::max() || c < -std::numeric_limits<std::int64_t>::max()) {
          throw ResourceError("scaled matrix coefficient exceeds 64 bits");
        }
        f.int_coeff_[j] = static_cast<std::int64_t>(c);
      }
      i128 off = i128{shift.rational().num()} * (d / shift.rational().den());
      if (off > std::numeric_limits<std::int64_t>::max() || off < -std::numeric_limits<std::int64_t>::max()) {
        throw ResourceError("scaled shift exceeds 64 bits");
      }
      f.exact_ = true;
      f.den_ = d;
      f.int_offset_ = static_cast<std::int64_t>(off);
      return f;
    } catch (const ResourceError&) {
      // Common denominator too large: fall back to float evaluation.
      f = RowForm{};
    }
  }
  f.exact_ = false;
  f.coeff_.resize(cols_);
  for (std::size_t j = 0; j < cols_; ++j) f.coeff_[j] = entry(i, j).value();
  f.offset_ = shift.value();
  return f;
}

std::vector<RowForm> MatrixSpec::row_forms() const {
  std::vector<RowForm> forms;
  forms.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) forms.push_back(row_form(i));
  return forms;
}

std::vector<RowForm> MatrixSpec::row_forms(std::span<const Scalar> shift) const {
  if (shift.size() != rows_) {
    throw UsageError("shift has dimension " + std::to_string(shift.size()) + ", matrix has " + std::to_string(rows_) +
                     " rows");
  }
  std::vector<RowForm> forms;
  forms.reserve(rows_);
  for (std::size_t i = 0; i < rows_; ++i) forms.push_back(row_form(i, shift[i]));
  return forms;
}

// -------------------------------------------------------- approximation

ApproxTuple::ApproxTuple(std::vector<ApproxFunction> functions) : functions_(std::move(functions)) {
  if (functions_.empty()) throw UsageError("approximation tuple must have at least one function");
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    const std::string which = "psi_" + std::to_string(i + 1);
    if (const auto* pl = std::get_if<PowerLaw>(&functions_[i])) {
      if (!(pl->coefficient > 0) || !std::isfinite(pl->coefficient)) {
        throw UsageError(which + ": power-law coefficient must be positive");
      }
      if (!(pl->exponent > 0) || !std::isfinite(pl->exponent)) {
        throw UsageError(which + ": power-law exponent must be positive");
      }
      continue;
    }
    const auto& tab = std::get<Tabulated>(functions_[i]);
    if (tab.samples.empty()) throw UsageError(which + ": tabulated function needs samples");
    for (std::size_t k = 0; k < tab.samples.size(); ++k) {
      auto [r, y] = tab.samples[k];
      if (!is_power_of_two(r)) throw UsageError(which + ": sample abscissa " + fmt(r) + " is not a power of two");
      if (!(y > 0) || !std::isfinite(y)) throw UsageError(which + ": samples must be strictly positive");
      if (k > 0) {
        if (!(r > tab.samples[k - 1].first)) throw UsageError(which + ": sample abscissae must increase");
        if (y > tab.samples[k - 1].second) throw UsageError(which + ": samples must be non-increasing");
      }
    }
  }
}

ApproxTuple ApproxTuple::power_law(std::size_t n, long double coefficient, long double exponent) {
  return ApproxTuple(std::vector<ApproxFunction>(n, PowerLaw{coefficient, exponent}));
}

ApproxTuple ApproxTuple::constant(std::size_t n, long double value) {
  return ApproxTuple(std::vector<ApproxFunction>(n, Tabulated{{{1.0L, value}}}));
}

long double ApproxTuple::eval(std::size_t i, long double r) const {
  if (!(r > 0)) throw UsageError("approximation functions are evaluated at r > 0, got " + fmt(r));
  if (const auto* pl = std::get_if<PowerLaw>(&functions_[i])) {
    return pl->coefficient * std::pow(r, -pl->exponent);
  }
  const auto& s = std::get<Tabulated>(functions_[i]).samples;
  auto it = std::upper_bound(s.begin(), s.end(), r, [](long double x, const auto& sample) { return x < sample.first; });
  if (it == s.begin()) return s.front().second;
  return std::prev(it)->second;
}

std::vector<long double> ApproxTuple::eval(long double r) const {
  std::vector<long double> out(functions_.size());
  for (std::size_t i = 0; i < functions_.size(); ++i) out[i] = eval(i, r);
  return out;
}

long double ApproxTuple::product(long double r) const {
  long double p = 1;
  for (std::size_t i = 0; i < functions_.size(); ++i) p *= eval(i, r);
  return p;
}

std::string ApproxTuple::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    if (i) os << ';';
    if (const auto* pl = std::get_if<PowerLaw>(&functions_[i])) {
      os << "pow:" << fmt(pl->coefficient) << ',' << fmt(pl->exponent);
    } else {
      os << "tab:";
      const auto& s = std::get<Tabulated>(functions_[i]).samples;
      for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) os << ',';
        os << fmt(s[k].first) << '=' << fmt(s[k].second);
      }
    }
  }
  return os.str();
}

std::vector<long double> eval_tuple(const ApproxTuple& psi, long double r) { return psi.eval(r); }

// ------------------------------------------------------------ rectangles

TorusRectangle::TorusRectangle(std::vector<long double> c, std::vector<long double> r)
    : center(std::move(c)), radii(std::move(r)) {
  if (center.empty() || center.size() != radii.size()) {
    throw UsageError("rectangle center and radii must be non-empty and of equal dimension");
  }
  for (auto& x : center) {
    if (!std::isfinite(x)) throw UsageError("rectangle center must be finite");
    x = frac(x);
  }
  for (long double r0 : radii) {
    if (!(r0 > 0)) throw UsageError("rectangle radii must be positive");
  }
}

long double TorusRectangle::volume() const {
  long double v = 1;
  for (long double r : radii) v *= std::min(1.0L, 2 * r);
  return v;
}

long double frac(long double x) {
  long double f = x - std::floor(x);
  return f >= 1.0L ? 0.0L : f;
}

long double torus_distance(long double a, long double b) {
  long double d = frac(a - b);
  return std::min(d, 1.0L - d);
}

bool rect_contains(const TorusRectangle& rect, std::span<const long double> x) {
  if (x.size() != rect.size()) throw UsageError("point dimension does not match rectangle");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(torus_distance(x[i], rect.center[i]) < rect.radii[i])) return false;
  }
  return true;
}

// ------------------------------------------------------------ quasi-norm

long double quasi_norm(std::span<const long double> x, const WeightVector& w) {
  if (x.size() != w.size()) {
    throw UsageError("quasi_norm: vector has dimension " + std::to_string(x.size()) + ", weights have " +
                     std::to_string(w.size()));
  }
  long double best = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double a = std::fabs(x[i]);
    if (a == 0) continue;
    long double e = w.value(i);
    best = std::max(best, e == 1 ? a : std::pow(a, 1.0L / e));
  }
  return best;
}

long double quasi_norm(std::span<const std::int64_t> q, const WeightVector& w) {
  if (q.size() != w.size()) {
    throw UsageError("quasi_norm: vector has dimension " + std::to_string(q.size()) + ", weights have " +
                     std::to_string(w.size()));
  }
  long double best = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] == 0) continue;
    long double a = static_cast<long double>(q[i] < 0 ? -q[i] : q[i]);
    long double e = w.value(i);
    best = std::max(best, e == 1 ? a : std::pow(a, 1.0L / e));
  }
  return best;
}

NearestResidual nearest_residual(const MatrixSpec& a, std::span<const std::int64_t> q) {
  if (q.size() != a.cols())
    throw UsageError("q has dimension " + std::to_string(q.size()) + ", matrix has " + std::to_string(a.cols()) +
                     " columns");
  NearestResidual out;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Residual r = a.row_form(i).residual(q);
    out.p.push_back(r.p);
    out.residuals.push_back(r);
  }
  return out;
}

// ----------------------------------------------------------- ball bounds

std::int64_t coordinate_bound(const Scalar& radius, const Scalar& exponent, bool strict) {
  if (!(radius.value() > 0)) throw UsageError("ball radius must be positive");
  const long double v = std::pow(radius.value(), exponent.value());
  if (v >= 9.0e18L) throw ResourceError("coordinate bound " + fmt(v) + " exceeds 64-bit range");
  const long double nearest = std::nearbyint(v);
  const auto k = static_cast<std::int64_t>(nearest);
  if (std::fabs(v - nearest) <= 1e-9L * std::max(1.0L, v) && k > 0) {
    // Decide radius^exponent versus k exactly: (a/b)^(c/d) vs k  <=>  (a/b)^c vs k^d.
    int cmp = 2;
    if (radius.is_exact() && exponent.is_exact() && exponent.rational().num() <= 64 &&
        exponent.rational().den() <= 64) {
      try {
        Rational lhs = radius.rational().pow(static_cast<int>(exponent.rational().num()));
        Rational rhs = Rational(k).pow(static_cast<int>(exponent.rational().den()));
        cmp = lhs < rhs ? -1 : (lhs == rhs ? 0 : 1);
      } catch (const ResourceError&) {
        cmp = 2;
      }
    }
    if (cmp == 2) cmp = std::fabs(v - nearest) <= 1e-12L * std::max(1.0L, v) ? 0 : (v < nearest ? -1 : 1);
    if (cmp == 0) return strict ? k - 1 : k;
    if (cmp < 0) return k - 1;
    return k;
  }
  auto fl = static_cast<std::int64_t>(std::floor(v));
  return fl;
}

std::vector<std::int64_t> ball_bounds(const WeightVector& w, const Scalar& radius, bool strict) {
  std::vector<std::int64_t> b(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) b[j] = coordinate_bound(radius, w[j], strict);
  return b;
}

}  // namespace twistlab
