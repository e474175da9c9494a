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

#include "twistlab/transference.hpp"

#include <algorithm>
#include <cmath>

#include "search.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/random.hpp"

namespace twistlab {

namespace {

const Scalar kOne = Scalar::integer(1);
const Scalar kHalf = Scalar(Rational(1, 2));

void require_positive(const Scalar& x, const char* name) {
  if (!(x.value() > 0) || !std::isfinite(x.value())) throw UsageError(std::string(name) + " must be positive");
}

Scalar max_by_value(const Scalar& a, const Scalar& b) { return b.value() > a.value() ? b : a; }

ApproxWitness shifted_witness(const WeightVector& alpha, const std::vector<RowForm>& rows,
                              std::span<const std::int64_t> q) {
  ApproxWitness w;
  w.q.assign(q.begin(), q.end());
  for (const auto& row : rows) {
    const Residual r = row.residual(q);
    w.p.push_back(r.p);
    w.residuals.push_back(r.value);
  }
  w.qnorm = quasi_norm(q, alpha);
  return w;
}

}  // namespace

Scalar transference_base(const Scalar& c, const Scalar& big_n, std::size_t n, std::size_t m) {
  require_positive(c, "C");
  require_positive(big_n, "N");
  const Scalar inv = c.pow_int(-static_cast<int>(n)) * big_n.pow_int(-static_cast<int>(m));
  return kHalf * (inv + kOne);
}

Scalar compute_c1(const Scalar& c, const Scalar& big_n, std::span<const Scalar> v, std::span<const Scalar> alpha) {
  if (v.empty() || alpha.empty()) throw UsageError("compute_c1 needs nonempty v and alpha");
  const Scalar base = transference_base(c, big_n, v.size(), alpha.size());
  Scalar best = base.pow(kOne / v[0]);
  for (const auto& e : v) {
    require_positive(e, "v_i");
    best = max_by_value(best, base.pow(kOne / e));
  }
  for (const auto& e : alpha) {
    require_positive(e, "alpha_j");
    best = max_by_value(best, base.pow(kOne / e));
  }
  return best;
}

Scalar compute_c2(const Scalar& eps, std::span<const Scalar> v, std::span<const Scalar> alpha) {
  require_positive(eps, "epsilon");
  if (v.empty() || alpha.empty()) throw UsageError("compute_c2 needs nonempty v and alpha");
  Scalar lo = v[0];
  for (const auto& e : v) {
    require_positive(e, "v_i");
    if (e.value() < lo.value()) lo = e;
  }
  for (const auto& e : alpha) {
    require_positive(e, "alpha_j");
    if (e.value() < lo.value()) lo = e;
  }
  const Scalar base = kHalf * (eps.pow_int(-static_cast<int>(v.size())) + kOne);
  return base.pow(kOne / lo);
}

DirichletConstants dirichlet_constants(const Scalar& c, const Scalar& big_n, const Scalar& eps, const WeightVector& v,
                                       const WeightVector& alpha) {
  DirichletConstants k;
  k.c1 = compute_c1(c, big_n, v.exponents(), alpha.exponents());
  k.c2 = compute_c2(eps, v.exponents(), alpha.exponents());
  k.big_c = c;
  k.big_n = big_n;
  k.eps = eps;
  k.n = v.size();
  k.m = alpha.size();
  k.v = v.exponents();
  k.alpha = alpha.exponents();
  return k;
}

Truth homogeneous_empty(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& c,
                        const Scalar& big_n, const Exec& exec, std::uint64_t* indeterminate) {
  if (v.size() != a.rows() || alpha.size() != a.cols()) throw UsageError("weight dimensions do not match the matrix");
  require_positive(c, "C");
  require_positive(big_n, "N");
  // q = 0: any nonzero p has |p|_v >= 1, with equality at unit vectors.
  const Truth pure_p = less(kOne, c);
  if (pure_p == Truth::True) {
    if (indeterminate) *indeterminate = 0;
    return Truth::False;
  }
  detail::CenteredBox box(ball_bounds(alpha, big_n, true));
  box.check_budget(exec.point_budget, "homogeneous_empty");
  const auto rows = a.row_forms();
  std::vector<Threshold> t(a.rows());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = Threshold::from(c.pow(v[i]));
  auto hit = detail::first_solution(box, exec, [&](std::span<const std::int64_t> q, std::uint64_t& indet) {
    if (detail::is_zero(q)) return Truth::False;
    return detail::rows_within(rows, t, q, false, indet);
  });
  if (indeterminate) *indeterminate = hit.indeterminate + (pure_p == Truth::Indeterminate);
  if (hit.found) return Truth::False;
  return (hit.maybe || pure_p == Truth::Indeterminate) ? Truth::Indeterminate : Truth::True;
}

SolveResult inhomogeneous_solve(const MatrixSpec& a, const WeightVector& alpha, std::span<const Scalar> b,
                                std::span<const Scalar> radii, const Scalar& norm_bound, const SolveOptions& options,
                                const Exec& exec) {
  if (alpha.size() != a.cols()) throw UsageError("alpha dimension does not match the matrix");
  if (b.size() != a.rows()) throw UsageError("b must have one entry per matrix row");
  if (radii.size() != a.rows()) throw UsageError("radii must have one entry per matrix row");
  for (const auto& r : radii) require_positive(r, "radius");
  require_positive(norm_bound, "norm bound M");
  bool b_zero = true;
  for (const auto& x : b) b_zero = b_zero && x.is_exact() && x.rational().num() == 0;

  detail::CenteredBox box(ball_bounds(alpha, norm_bound, true));
  const auto rows = a.row_forms(b);
  std::vector<Threshold> t(radii.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = Threshold::from(radii[i]);
  auto hit = detail::first_solution(
      box, exec,
      [&](std::span<const std::int64_t> q, std::uint64_t& indet) {
        if (b_zero && detail::is_zero(q)) return Truth::False;
        return detail::rows_within(rows, t, q, options.inclusive, indet);
      },
      exec.point_budget);
  if (hit.truncated)
    box.check_budget(exec.point_budget, "inhomogeneous_solve (no witness among the first points scanned)");
  SolveResult out;
  out.indeterminate = hit.indeterminate;
  if (hit.found) {
    out.found = Truth::True;
    out.witness = shifted_witness(alpha, rows, hit.q);
  } else {
    out.found = hit.maybe ? Truth::Indeterminate : Truth::False;
  }
  return out;
}

std::vector<std::vector<double>> sample_shifts(std::size_t n, std::size_t count, std::uint64_t seed) {
  return sample_torus_points(n, count, seed);
}

namespace {

std::vector<Scalar> to_scalars(const std::vector<double>& xs) {
  std::vector<Scalar> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(Scalar::from_double(x));
  return out;
}

}  // namespace

TransferenceReport verify_transference(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                       const Scalar& c, const Scalar& big_n,
                                       const std::vector<std::vector<double>>& shifts, const Exec& exec) {
  const Truth pre = homogeneous_empty(a, v, alpha, c, big_n, exec);
  if (pre != Truth::True) {
    throw UsageError(std::string("verify_transference precondition failed: the homogeneous system with C = ") +
                     c.str() + ", N = " + big_n.str() + " is " + (pre == Truth::False ? "solvable" : "indeterminate"));
  }
  TransferenceReport rep;
  rep.base = transference_base(c, big_n, a.rows(), a.cols());
  rep.c1 = compute_c1(c, big_n, v.exponents(), alpha.exponents());
  for (std::size_t i = 0; i < a.rows(); ++i) rep.radii.push_back(rep.base * c.pow(v[i]));
  rep.norm_bound = rep.c1 * big_n;
  std::vector<Scalar> box_bound;
  for (std::size_t j = 0; j < a.cols(); ++j) box_bound.push_back(rep.base * big_n.pow(alpha[j]));

  for (const auto& b : shifts) {
    if (b.size() != a.rows()) throw UsageError("shift dimension does not match the matrix");
    ShiftCheck chk;
    chk.b = b;
    const auto bs = to_scalars(b);
    SolveResult r = inhomogeneous_solve(a, alpha, bs, rep.radii, rep.norm_bound, SolveOptions{true}, exec);
    chk.solved = r.found;
    chk.witness = r.witness;
    if (r.found == Truth::True) {
      ++rep.passes;
      bool inside = true;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        inside = inside && less(Scalar::integer(std::llabs(r.witness->q[j])), box_bound[j]) == Truth::True;
      }
      chk.in_proof_box = inside;
      rep.in_proof_box += inside;
    } else if (r.found == Truth::Indeterminate) {
      ++rep.indeterminate;
    } else {
      ++rep.failures;
    }
    rep.checks.push_back(std::move(chk));
  }
  return rep;
}

LevelTransferenceReport verify_level_transference(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                                  const Scalar& eps, int max_level, std::size_t shifts_per_level,
                                                  std::uint64_t seed, const Exec& exec) {
  LevelTransferenceReport rep;
  rep.c2 = compute_c2(eps, v.exponents(), alpha.exponents());
  rep.prefix = level_set_prefix(a, v, alpha, eps, max_level, exec);
  for (const auto& rec : rep.prefix.levels) {
    if (rec.in_l != Truth::True) continue;
    LevelTransferenceLevel lv;
    lv.level = rec.level;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      lv.radii.push_back(rep.c2 * level_threshold(eps, v, i, a.cols(), rec.level));
    }
    lv.norm_bound = rep.c2 * Scalar(Rational(std::int64_t{1} << rec.level));
    const auto shifts =
        sample_shifts(a.rows(), shifts_per_level, derive_seed(seed, static_cast<std::uint64_t>(rec.level)));
    for (const auto& b : shifts) {
      SolveResult r = inhomogeneous_solve(a, alpha, to_scalars(b), lv.radii, lv.norm_bound, SolveOptions{}, exec);
      if (r.found == Truth::True) {
        ++lv.passes;
      } else if (r.found == Truth::Indeterminate) {
        ++lv.indeterminate;
      } else {
        ++lv.failures;
      }
    }
    rep.failures += lv.failures;
    rep.levels.push_back(std::move(lv));
  }
  return rep;
}

}  // namespace twistlab
