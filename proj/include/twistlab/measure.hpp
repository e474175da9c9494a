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

// Series, hit counts and Lebesgue-measure estimates for truncations of the
// limsup set W_A(Psi), plus the local ubiquity coverage check.
//
// Target rectangles are centered at {Aq} on the torus with half-widths
// psi_i(|q|_alpha); membership uses the per-coordinate torus distance.

#ifndef TWISTLAB_MEASURE_HPP
#define TWISTLAB_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "twistlab/core.hpp"
#include "twistlab/exec.hpp"
#include "twistlab/lattice.hpp"

namespace twistlab {

// Partial sums of 2^{m l} prod_i psi_i(2^l) over the first K given levels,
// K = 1..min(count, levels.size()).
std::vector<long double> dyadic_series(const ApproxTuple& psi, std::size_t m, std::span<const int> levels,
                                       std::size_t count);

// Partial sums of r^{m-1} prod_i psi_i(r), r = 1..R.
std::vector<long double> radial_series(const ApproxTuple& psi, std::size_t m, std::uint64_t cutoff);

// Least-squares slope of log S_K against log K over the second half of the
// partial sums. Descriptive only.
long double growth_exponent(std::span<const long double> partial_sums);

// max over r = 2^0..2^max_level and rows of psi_i(r) r^{v_i m/n}: the
// implied constant of psi_i(r) << r^{-v_i m/n} over the sampled range.
long double hypothesis_ratio(const ApproxTuple& psi, const WeightVector& v, std::size_t m, int max_level);

struct BorelCantelliReport {
  long double constant = 0;    // m 2^{m+1} 3^{m-1} (1 - 2^{-min alpha})
  long double volume_sum = 0;  // sum over 2 < |q|_alpha <= 2^{R+1} of prod 2 psi_i(|q|_alpha)
  long double series_sum = 0;  // sum_{r=1}^{2^{R+1}} r^{m-1} prod psi_i(r)
  long double bound = 0;       // constant 2^{n+1} series_sum
  int shells = 0;              // R
};

BorelCantelliReport borel_cantelli(const ApproxTuple& psi, const WeightVector& alpha, int shells,
                                   const Exec& exec = {});

struct HitCount {
  std::uint64_t count = 0;
  std::vector<ApproxWitness> witnesses;  // first ones in enumeration order
  std::uint64_t indeterminate = 0;       // q decided only up to the band (not counted)
};

// Nonzero q with |q|_alpha <= Q and |A_i.q - b_i - p_i| < psi_i(|q|_alpha) for
// every row.
HitCount hit_count(std::span<const Scalar> b, const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                   const Scalar& q_max, std::size_t witness_cap = 16, const Exec& exec = {});

enum class Estimator { Grid, MonteCarlo };
const char* to_string(Estimator e);

struct EstimatorConfig {
  Estimator method = Estimator::Grid;
  // Grid: cell step per axis (cells are centered at (k + 1/2) step).
  double grid_step = 1e-3;
  // Monte Carlo: number of uniform samples and root seed.
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
};

// Default for dimension n: grid at step 1e-3 for n <= 2, Monte Carlo above.
EstimatorConfig default_estimator(std::size_t n, std::uint64_t seed);

struct MeasureEstimate {
  long double q = 0;  // cutoff Q the estimate belongs to
  long double value = 0;
  Estimator method = Estimator::Grid;
  long double resolution = 0;  // grid step or sample count
  long double half_width = 0;  // 95% Wilson half-width, Monte Carlo only
  std::uint64_t seed = 0;
};

// lambda_n of the union of rectangles over tail_start < |q|_alpha <= Q (q != 0),
// for each Q in the increasing list. tail_start = 0 gives the full union.
std::vector<MeasureEstimate> limsup_measure(const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                                            std::span<const Scalar> cutoffs, const EstimatorConfig& est,
                                            const Scalar& tail_start = Scalar::integer(0), const Exec& exec = {});

struct EquidistResult {
  std::uint64_t in_box = 0;
  std::uint64_t total = 0;
  long double ratio = 0;
};

// #{q : |q|_alpha <= N, {Aq} in B} / #{q : |q|_alpha <= N}, q = 0 counted.
EquidistResult equidist_ratio(const MatrixSpec& a, const WeightVector& alpha, const TorusRectangle& box,
                              const Scalar& big_n, const Exec& exec = {});

struct UbiquityConfig {
  Scalar eps;
  Scalar c2;
  Scalar c3;
  Scalar c3_bound;         // (2^{-(n+2)} eps^{-n} c2^{-(n+m)})^{1/m}
  bool admissible = true;  // c3 < c3_bound
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<Scalar> v;
  std::vector<int> levels;  // l_1 < l_2 < ... (in-L levels of the prefix)

  std::size_t size() const { return levels.size(); }
  Scalar upper(std::size_t k) const;  // u_k = c2 2^{l_k}
  Scalar lower(std::size_t k) const;  // l_k = c3 u_k
  // rho_i(r) = eps c2^{1 + v_i m/n} r^{-v_i m/n}.
  long double rho(std::size_t i, long double r) const;
  // rho_i(u_k) = eps c2 2^{-l_k v_i m/n}.
  std::vector<long double> rho_at(std::size_t k) const;
};

struct UbiquityOptions {
  std::optional<Scalar> c3;         // default: half of the admissible bound
  bool allow_inadmissible = false;  // accept any c3 in (0, 1)
};

// Builds the configuration from the level-set prefix up to max_level.
UbiquityConfig make_ubiquity_config(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                    const Scalar& eps, int max_level, const UbiquityOptions& options = {},
                                    const Exec& exec = {});

struct CoverageResult {
  long double fraction = 0;
  long double half_width = 0;
  std::uint64_t resonant_points = 0;  // #J_k
  std::uint64_t cells = 0;            // grid cells or samples inside B
};

// lambda_n(B cap union_{q in J_k} Delta({Aq}, rho(u_k))) / lambda_n(B), with
// J_k = {q : l_k <= |q|_alpha <= u_k}. k is 0-based into cfg.levels.
CoverageResult ubiquity_coverage(const MatrixSpec& a, const WeightVector& alpha, const UbiquityConfig& cfg,
                                 std::size_t k, const TorusRectangle& box, const EstimatorConfig& est,
                                 const Exec& exec = {});

}  // namespace twistlab

#endif  // TWISTLAB_MEASURE_HPP
