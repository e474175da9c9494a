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

// Weighted geometry primitives shared by every other module.

#ifndef TWISTLAB_CORE_HPP
#define TWISTLAB_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twistlab/rational.hpp"
#include "twistlab/scalar.hpp"

namespace twistlab {

// Positive exponents (w_1..w_d) with sum d. Parameterizes the quasi-norm
// |x|_w = max_i |x_i|^{1/w_i}.
class WeightVector {
 public:
  // Throws UsageError unless every exponent is > 0 and the sum is d (exactly
  // for rational exponents, within `tolerance` otherwise).
  explicit WeightVector(std::vector<Scalar> exponents, long double tolerance = kEta);
  static WeightVector uniform(std::size_t d);

  std::size_t size() const { return exponents_.size(); }
  const Scalar& operator[](std::size_t i) const { return exponents_[i]; }
  long double value(std::size_t i) const { return exponents_[i].value(); }
  const std::vector<Scalar>& exponents() const { return exponents_; }
  long double min_value() const;
  long double max_value() const;
  bool all_exact() const;
  std::string str() const;

 private:
  std::vector<Scalar> exponents_;
};

// One linear form x -> A_i.q - b_i, prepared for fast nearest-integer
// residuals. Exact forms keep integer coefficients over a common
// denominator.
class RowForm {
 public:
  Residual residual(std::span<const std::int64_t> q) const;
  bool exact() const { return exact_; }

 private:
  friend class MatrixSpec;
  bool exact_ = false;
  std::vector<std::int64_t> int_coeff_;
  std::int64_t int_offset_ = 0;
  std::int64_t den_ = 1;
  std::vector<long double> coeff_;
  long double offset_ = 0;
};

// n x m matrix whose entries are all exact rationals or all floats. Float
// matrices remember the number of significant digits they were given with.
class MatrixSpec {
 public:
  static MatrixSpec exact(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  static MatrixSpec floating(std::size_t rows, std::size_t cols, std::vector<long double> entries, int digits,
                             std::vector<std::string> source_text = {});
  static MatrixSpec zero(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_exact() const { return exact_; }
  int precision_digits() const { return digits_; }
  Scalar entry(std::size_t i, std::size_t j) const;
  std::string entry_text(std::size_t i, std::size_t j) const;

  // A_i.q - shift, with the shift folded into the form.
  RowForm row_form(std::size_t i, const Scalar& shift = Scalar::integer(0)) const;
  std::vector<RowForm> row_forms() const;
  std::vector<RowForm> row_forms(std::span<const Scalar> shift) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  bool exact_ = true;
  int digits_ = 0;
  std::vector<Rational> exact_entries_;
  std::vector<long double> float_entries_;
  std::vector<std::string> source_;
};

// psi(r) = c * r^{-tau}.
struct PowerLaw {
  long double coefficient = 1;
  long double exponent = 1;
};

// Samples (r_k, y_k) on a dyadic grid (each r_k a power of two), strictly
// positive and non-increasing. Evaluation is right-constant: the value at r is
// y_k for the largest r_k <= r, or y_0 below the first sample.
struct Tabulated {
  std::vector<std::pair<long double, long double>> samples;
};

using ApproxFunction = std::variant<PowerLaw, Tabulated>;

// Psi = (psi_1, ..., psi_n).
class ApproxTuple {
 public:
  explicit ApproxTuple(std::vector<ApproxFunction> functions);
  static ApproxTuple power_law(std::size_t n, long double coefficient, long double exponent);
  static ApproxTuple constant(std::size_t n, long double value);

  std::size_t size() const { return functions_.size(); }
  const ApproxFunction& function(std::size_t i) const { return functions_[i]; }
  long double eval(std::size_t i, long double r) const;
  std::vector<long double> eval(long double r) const;
  long double product(long double r) const;
  std::string str() const;

 private:
  std::vector<ApproxFunction> functions_;
};

// Open box on the n-torus: every coordinate within radius_i of center_i.
struct TorusRectangle {
  std::vector<long double> center;
  std::vector<long double> radii;

  TorusRectangle() = default;
  TorusRectangle(std::vector<long double> c, std::vector<long double> r);
  std::size_t size() const { return center.size(); }
  long double volume() const;
};

long double torus_distance(long double a, long double b);
long double frac(long double x);

long double quasi_norm(std::span<const long double> x, const WeightVector& w);
long double quasi_norm(std::span<const std::int64_t> q, const WeightVector& w);

struct NearestResidual {
  std::vector<std::int64_t> p;
  std::vector<Residual> residuals;
};
NearestResidual nearest_residual(const MatrixSpec& a, std::span<const std::int64_t> q);

std::vector<long double> eval_tuple(const ApproxTuple& psi, long double r);

bool rect_contains(const TorusRectangle& rect, std::span<const long double> x);

// Largest k >= 0 with k < radius^exponent (strict) or k <= radius^exponent.
// Near-integer powers are settled exactly when both inputs are rational.
std::int64_t coordinate_bound(const Scalar& radius, const Scalar& exponent, bool strict);

// Per-coordinate bounds of {q : |q|_w < N} (strict) or {q : |q|_w <= N}.
std::vector<std::int64_t> ball_bounds(const WeightVector& w, const Scalar& radius, bool strict);

}  // namespace twistlab

#endif  // TWISTLAB_CORE_HPP
