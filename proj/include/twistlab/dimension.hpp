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

// Hausdorff dimension formulas for W_A(Psi) with psi_i(r) = r^{-tau_i}, and a
// box-counting estimator for finite truncations.
//
// All closed forms are evaluated in exact rational arithmetic whenever the
// inputs are exact, so equal formulas compare equal.

#ifndef TWISTLAB_DIMENSION_HPP
#define TWISTLAB_DIMENSION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/exec.hpp"

namespace twistlab {

// Row for one pivot exponent P. Index sets are 1-based.
struct PivotRow {
  Scalar pivot;
  std::vector<int> k1;  // a_j >= P
  std::vector<int> k2;  // a_j + t_j <= P, not in k1
  std::vector<int> k3;  // the rest
  Scalar d;             // |K1| + |K2| + (sum_{K3} a_j - sum_{K2} t_j) / P
};

struct ConditionCheck {
  std::string name;
  Scalar lhs;
  Scalar rhs;
  bool holds = false;
};

struct DimensionReport {
  std::string mode;  // "unweighted", "weighted2d" or "mtprr"
  Scalar value;
  std::vector<PivotRow> pivots;
  std::size_t argmin = 0;  // index into pivots
  std::vector<ConditionCheck> conditions;
  // Agreement between the closed form and the pivot minimization, when both
  // are computed.
  std::optional<bool> cross_check;
};

// min over pivots {a_i} and {a_i + t_i} (deduplicated) of d(P). Requires
// a_i > 0 and t_i >= 0.
DimensionReport mtprr_lower_bound(std::span<const Scalar> a, std::span<const Scalar> t);

// (m + sum_{i : tau_j > tau_i} (tau_j - tau_i)) / tau_j, j 1-based.
Scalar upper_cover_exponent(std::size_t m, std::span<const Scalar> tau, std::size_t j);

// v = (1, ..., 1); requires every tau_j > m/n.
DimensionReport dim_unweighted(std::size_t m, std::size_t n, std::span<const Scalar> tau);

// n = 2; requires tau_i >= v_i m/2 and
// min{min(v) m / (2 min(tau)), min(v)/max(v)} >= (m - min(tau)) / max(tau).
// Returns (m + max(tau) - min(tau)) / max(tau).
DimensionReport dim_weighted_2d(std::size_t m, std::span<const Scalar> v, std::span<const Scalar> tau);

enum class BoxCover {
  Union,  // every rectangle with 0 < |q|_alpha <= Q
  Shell,  // at box size delta, rectangles with delta <= min_i psi_i(|q|_alpha) < 2 delta
};
const char* to_string(BoxCover c);

struct BoxCount {
  long double delta = 0;
  std::uint64_t boxes = 0;  // delta-boxes meeting the cover
  std::uint64_t total = 0;  // (1/delta)^n
  std::uint64_t rectangles = 0;
  bool excluded = false;
  std::string reason;  // "saturated" or "trivial"
};

struct BoxDimReport {
  BoxCover mode = BoxCover::Shell;
  long double slope = 0;
  long double intercept = 0;
  long double residual = 0;  // RMS of the fit
  std::size_t used = 0;      // deltas entering the fit
  std::string note;          // set when the fit falls back
  std::vector<BoxCount> counts;
};

// Each delta must be 1/K for an integer K; the list must decrease.
BoxDimReport box_dim_estimate(const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                              const Scalar& q_max, std::span<const double> deltas, BoxCover mode = BoxCover::Shell,
                              const Exec& exec = {});

}  // namespace twistlab

#endif  // TWISTLAB_DIMENSION_HPP
