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

// Homogeneous-to-inhomogeneous transference with explicit constants.

#ifndef TWISTLAB_TRANSFERENCE_HPP
#define TWISTLAB_TRANSFERENCE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/exec.hpp"
#include "twistlab/lattice.hpp"

namespace twistlab {

// (1/2)(C^{-n} N^{-m} + 1), the inflation factor shared by both constants.
Scalar transference_base(const Scalar& c, const Scalar& big_n, std::size_t n, std::size_t m);

// max over rows and columns of base^{1/v_i} and base^{1/alpha_j}. The
// exponents are taken as given; they need not form weight vectors.
Scalar compute_c1(const Scalar& c, const Scalar& big_n, std::span<const Scalar> v, std::span<const Scalar> alpha);

// ((1/2)(eps^{-n} + 1))^{1 / min(v_i, alpha_j)}.
Scalar compute_c2(const Scalar& eps, std::span<const Scalar> v, std::span<const Scalar> alpha);

struct DirichletConstants {
  Scalar c1;
  Scalar c2;
  Scalar big_c;
  Scalar big_n;
  Scalar eps;
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Scalar> v;
  std::vector<Scalar> alpha;
};

DirichletConstants dirichlet_constants(const Scalar& c, const Scalar& big_n, const Scalar& eps, const WeightVector& v,
                                       const WeightVector& alpha);

// No (q, p) != 0 with |Aq - p|_v < C and |q|_alpha < N.
Truth homogeneous_empty(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& c,
                        const Scalar& big_n, const Exec& exec = {}, std::uint64_t* indeterminate = nullptr);

struct SolveOptions {
  bool inclusive = false;  // |r_i| <= radius_i instead of <
};

struct SolveResult {
  Truth found = Truth::False;  // Indeterminate: only band-level candidates
  std::optional<ApproxWitness> witness;
  std::uint64_t indeterminate = 0;
};

// First q (q = 0 included) with |q|_alpha < M and |A_i.q - b_i - p_i| < r_i for
// all rows, p_i the nearest integer. When b = 0 the trivial pair q = 0, p = 0
// is skipped.
SolveResult inhomogeneous_solve(const MatrixSpec& a, const WeightVector& alpha, std::span<const Scalar> b,
                                std::span<const Scalar> radii, const Scalar& norm_bound,
                                const SolveOptions& options = {}, const Exec& exec = {});

std::vector<std::vector<double>> sample_shifts(std::size_t n, std::size_t count, std::uint64_t seed);

struct ShiftCheck {
  std::vector<double> b;
  Truth solved = Truth::False;
  std::optional<ApproxWitness> witness;
  bool in_proof_box = false;  // |q_j| < base N^{alpha_j} as well
};

struct TransferenceReport {
  Scalar base;
  Scalar c1;
  std::vector<Scalar> radii;  // base C^{v_i}
  Scalar norm_bound;          // c1 N
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::size_t indeterminate = 0;
  std::size_t in_proof_box = 0;
  std::vector<ShiftCheck> checks;
};

// Requires homogeneous_empty(...) == True, otherwise UsageError.
TransferenceReport verify_transference(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                       const Scalar& c, const Scalar& big_n,
                                       const std::vector<std::vector<double>>& shifts, const Exec& exec = {});

struct LevelTransferenceLevel {
  int level = 0;
  std::vector<Scalar> radii;  // eps c2 2^{-level v_i m/n}
  Scalar norm_bound;          // c2 2^level
  std::size_t passes = 0;
  std::size_t failures = 0;
  std::size_t indeterminate = 0;
};

struct LevelTransferenceReport {
  Scalar c2;
  LevelSetReport prefix;
  std::vector<LevelTransferenceLevel> levels;  // only levels of the prefix that are in L
  std::size_t failures = 0;
};

LevelTransferenceReport verify_level_transference(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                                  const Scalar& eps, int max_level, std::size_t shifts_per_level,
                                                  std::uint64_t seed, const Exec& exec = {});

}  // namespace twistlab

#endif  // TWISTLAB_TRANSFERENCE_HPP
