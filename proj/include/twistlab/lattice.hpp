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

// Exhaustive enumeration of integer vectors in weighted quasi-norm balls and
// finite-scale evidence for singular / badly approximable matrices.
//
// Enumeration order: coordinates take the values 0, 1, -1, 2, -2, ... and the
// first coordinate varies slowest. "First witness" and tie-breaking always
// refer to this order.

#ifndef TWISTLAB_LATTICE_HPP
#define TWISTLAB_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/exec.hpp"

namespace twistlab {

struct ApproxWitness {
  std::vector<std::int64_t> q;
  std::vector<std::int64_t> p;
  std::vector<long double> residuals;  // A_i.q - b_i - p_i
  long double qnorm = 0;               // |q|_alpha
};

// Streams every q with 0 < |q|_alpha < N. Throws ResourceError when the
// coordinate box exceeds exec.point_budget.
void enumerate_ball(const WeightVector& alpha, const Scalar& radius,
                    const std::function<void(std::span<const std::int64_t>)>& sink, const Exec& exec = {});
std::vector<std::vector<std::int64_t>> enumerate_ball(const WeightVector& alpha, const Scalar& radius,
                                                      const Exec& exec = {});

// #{q : |q|_alpha <= N}, including q = 0, in closed form.
std::uint64_t count_ball(const WeightVector& alpha, const Scalar& radius);

struct ProfileResult {
  long double value = 0;
  ApproxWitness witness;
};

// min over 0 < |q|_alpha < N of max_i |A_i.q - p_i|^{n/(m v_i)}.
ProfileResult best_profile(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& radius,
                           const Exec& exec = {});

// Per-row threshold eps * 2^{-level v_i m/n}; exact when possible.
Scalar level_threshold(const Scalar& eps, const WeightVector& v, std::size_t row, std::size_t m, int level);

// True iff the eps-shrunk homogeneous system at scale 2^level has no
// solution. `indeterminate` receives the number of row comparisons that fell
// in the kEta band.
Truth level_in_L(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& eps, int level,
                 const Exec& exec = {}, std::uint64_t* indeterminate = nullptr);

// min over the 2^level ball of max_i |A_i.q - p_i| / (eps 2^{-level v_i m/n}).
// The level lies in L exactly when this is >= 1.
ProfileResult row_scaled_profile(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                 const Scalar& eps, int level, const Exec& exec = {});

struct LevelRecord {
  int level = 0;
  Truth in_l = Truth::False;
  long double best_value = 0;
  std::optional<ApproxWitness> witness;
  std::uint64_t indeterminate = 0;
};

struct LevelSetReport {
  Scalar epsilon;
  int max_level = 0;
  std::vector<LevelRecord> levels;
  std::uint64_t indeterminate_total = 0;
  std::uint64_t comparisons = 0;
};

// Levels 1..max_level from a single pass over the 2^max_level ball.
LevelSetReport level_set_prefix(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                const Scalar& eps, int max_level, const Exec& exec = {});

struct BadnessResult {
  long double value = 0;
  ApproxWitness witness;
};

// min over Q0 <= |q|_alpha < Q1 of max_i |q|_alpha |A_i.q - p_i|^{n/(m v_i)}.
BadnessResult badness_functional(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                 const Scalar& q0, const Scalar& q1, const Exec& exec = {});

enum class Verdict { BadLike, NonSingularLike, SingularLike, Inconclusive };
const char* to_string(Verdict v);

// Heuristic thresholds. A prefix "looks cofinite" when its trailing run of
// in-L levels covers at least tail_fraction of the levels; it "looks
// infinite" when at least top_half_fraction of the top half is in L.
struct ClassifyOptions {
  double tail_fraction = 0.5;
  double top_half_fraction = 0.5;
};

struct EpsilonSummary {
  LevelSetReport prefix;
  int true_count = 0;
  int trailing_true = 0;
  int top_half_true = 0;
  int top_half_size = 0;
  bool cofinite = false;
  bool empty_tail = false;
  bool infinite_looking = false;
};

struct Classification {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<EpsilonSummary> per_epsilon;
  std::uint64_t indeterminate_total = 0;
  std::uint64_t comparisons = 0;
};

// Finite-scale heuristic only: it cannot certify the asymptotic quantifiers.
Classification classify(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                        std::span<const Scalar> eps_grid, int max_level, const ClassifyOptions& options = {},
                        const Exec& exec = {});

}  // namespace twistlab

#endif  // TWISTLAB_LATTICE_HPP
