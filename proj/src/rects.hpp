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

// Flat storage of torus rectangles centered at {Aq}, and the two Lebesgue
// measure estimators built on it.

#ifndef TWISTLAB_SRC_RECTS_HPP
#define TWISTLAB_SRC_RECTS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/exec.hpp"

namespace twistlab::detail {

struct RectSet {
  std::size_t n = 0;
  std::vector<double> center;       // n per rectangle, in [0, 1)
  std::vector<double> radius;       // n per rectangle
  std::vector<double> qnorm;        // |q|_alpha
  std::vector<std::uint16_t> tier;  // index of the first cutoff containing q

  std::size_t size() const { return tier.size(); }
  const double* c(std::size_t k) const { return center.data() + k * n; }
  const double* r(std::size_t k) const { return radius.data() + k * n; }
};

struct CollectSpec {
  // Increasing cutoffs; q is kept when |q|_alpha <= the last one.
  std::vector<Scalar> cutoffs;
  // Drop q with |q|_alpha <= exclude_le (when set and positive).
  std::optional<Scalar> exclude_le;
  // Drop q with |q|_alpha < exclude_lt (when set).
  std::optional<Scalar> exclude_lt;
  // radii(qnorm, out[n]).
  std::function<void(long double, double*)> radii;
};

// Rectangles for nonzero q, in enumeration order.
RectSet collect_rects(const MatrixSpec& a, const WeightVector& alpha, const CollectSpec& spec, const Exec& exec);

// Axis-aligned box of grid points or samples: origin + [0, span) per axis.
struct Domain {
  std::vector<double> origin;
  std::vector<double> span;
  static Domain torus(std::size_t n);
};

// Number of grid points (cell centers, step ~ `step` per axis) covered by at
// least one rectangle of tier <= t, for each t < tiers. `cells` receives the
// total number of grid points.
std::vector<std::uint64_t> grid_cover(const RectSet& rects, std::size_t tiers, const Domain& dom, double step,
                                      const Exec& exec, std::uint64_t* cells);

// Same with `samples` uniform points of the domain; deterministic in `seed`.
std::vector<std::uint64_t> monte_carlo_cover(const RectSet& rects, std::size_t tiers, const Domain& dom,
                                             std::uint64_t samples, std::uint64_t seed, const Exec& exec);

// Wilson 95% half-width for `hits` out of `trials`.
long double wilson_half_width(std::uint64_t hits, std::uint64_t trials);

// Torus membership of x in one rectangle (strict).
bool rect_has(const RectSet& rects, std::size_t k, const double* x);

}  // namespace twistlab::detail

#endif  // TWISTLAB_SRC_RECTS_HPP
