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

#include "twistlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enumeration.hpp"
#include "search.hpp"
#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

using detail::CenteredBox;

constexpr long double kInf = std::numeric_limits<long double>::infinity();

void check_shapes(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha) {
  if (v.size() != a.rows()) {
    throw UsageError("v has " + std::to_string(v.size()) + " entries but the matrix has " + std::to_string(a.rows()) +
                     " rows");
  }
  if (alpha.size() != a.cols()) {
    throw UsageError("alpha has " + std::to_string(alpha.size()) + " entries but the matrix has " +
                     std::to_string(a.cols()) + " columns");
  }
}

// Exponents n / (m v_i) of the singular / bad functionals.
std::vector<long double> functional_exponents(const MatrixSpec& a, const WeightVector& v) {
  std::vector<long double> e(a.rows());
  const auto n = static_cast<long double>(a.rows());
  const auto m = static_cast<long double>(a.cols());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = n / (m * v.value(i));
  return e;
}

long double profile_value(std::span<const Residual> res, const std::vector<long double>& expo) {
  long double worst = 0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const long double x = std::fabs(res[i].value);
    worst = std::max(worst, x == 0 ? 0 : std::pow(x, expo[i]));
  }
  return worst;
}

long double profile_value(const std::vector<RowForm>& rows, const std::vector<long double>& expo,
                          std::span<const std::int64_t> q) {
  long double worst = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const long double x = std::fabs(rows[i].residual(q).value);
    worst = std::max(worst, x == 0 ? 0 : std::pow(x, expo[i]));
  }
  return worst;
}

ApproxWitness make_witness(const MatrixSpec& a, const WeightVector& alpha, std::span<const std::int64_t> q) {
  ApproxWitness w;
  w.q.assign(q.begin(), q.end());
  NearestResidual nr = nearest_residual(a, q);
  w.p = nr.p;
  for (const auto& r : nr.residuals) w.residuals.push_back(r.value);
  w.qnorm = quasi_norm(q, alpha);
  return w;
}

struct MinAcc {
  long double value = kInf;
  std::vector<std::int64_t> q;
};

template <class Score>
std::optional<MinAcc> min_over(const CenteredBox& box, const Exec& exec, Score score) {
  auto accs = detail::scan_chunks<MinAcc>(
      box, exec, [] { return MinAcc{}; },
      [&](MinAcc& acc, std::span<const std::int64_t> q, std::uint64_t) {
        if (auto s = score(q); s && *s < acc.value) {
          acc.value = *s;
          acc.q.assign(q.begin(), q.end());
        }
        return true;
      });
  std::optional<MinAcc> best;
  for (auto& acc : accs) {
    if (acc.q.empty()) continue;
    if (!best || acc.value < best->value) best = std::move(acc);
  }
  return best;
}

int floor_log2_levels(int max_level) {
  if (max_level < 1) throw UsageError("max level must be >= 1");
  if (max_level > 62) throw UsageError("max level must be <= 62");
  return max_level;
}

Scalar pow2_radius(int level) { return Scalar(Rational(std::int64_t{1} << level)); }

}  // namespace

void enumerate_ball(const WeightVector& alpha, const Scalar& radius,
                    const std::function<void(std::span<const std::int64_t>)>& sink, const Exec& exec) {
  if (!(radius.value() > 0)) throw UsageError("ball radius N must be positive");
  CenteredBox box(ball_bounds(alpha, radius, true));
  box.check_budget(exec.point_budget, "enumerate_ball");
  box.scan(0, box.extent(0), [&](std::span<const std::int64_t> q, std::uint64_t) {
    if (!detail::is_zero(q)) sink(q);
    return true;
  });
}

std::vector<std::vector<std::int64_t>> enumerate_ball(const WeightVector& alpha, const Scalar& radius,
                                                      const Exec& exec) {
  std::vector<std::vector<std::int64_t>> out;
  enumerate_ball(alpha, radius, [&](std::span<const std::int64_t> q) { out.emplace_back(q.begin(), q.end()); }, exec);
  return out;
}

std::uint64_t count_ball(const WeightVector& alpha, const Scalar& radius) {
  if (!(radius.value() > 0)) throw UsageError("ball radius N must be positive");
  unsigned __int128 total = 1;
  for (auto b : ball_bounds(alpha, radius, false)) {
    total *= 2 * static_cast<unsigned __int128>(b) + 1;
    if (total > std::numeric_limits<std::uint64_t>::max()) {
      throw ResourceError("count_ball: lattice point count exceeds 2^64");
    }
  }
  return static_cast<std::uint64_t>(total);
}

ProfileResult best_profile(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& radius,
                           const Exec& exec) {
  check_shapes(a, v, alpha);
  if (!(radius.value() > 0)) throw UsageError("ball radius N must be positive");
  CenteredBox box(ball_bounds(alpha, radius, true));
  box.check_budget(exec.point_budget, "best_profile");
  const auto rows = a.row_forms();
  const auto expo = functional_exponents(a, v);
  auto best = min_over(box, exec, [&](std::span<const std::int64_t> q) -> std::optional<long double> {
    if (detail::is_zero(q)) return std::nullopt;
    return profile_value(rows, expo, q);
  });
  if (!best) throw UsageError("best_profile: no nonzero q with |q|_alpha < " + radius.str());
  return {best->value, make_witness(a, alpha, best->q)};
}

Scalar level_threshold(const Scalar& eps, const WeightVector& v, std::size_t row, std::size_t m, int level) {
  const std::size_t n = v.size();
  const Scalar e = v[row] * Scalar::integer(static_cast<std::int64_t>(level) * static_cast<std::int64_t>(m)) /
                   Scalar::integer(static_cast<std::int64_t>(n));
  if (e.is_exact() && e.rational().is_integer() && e.rational().num() >= 0 && e.rational().num() <= 62) {
    return eps * Scalar(Rational(1, std::int64_t{1} << e.rational().num()));
  }
  return Scalar::approx(eps.value() * std::exp2(-e.value()));
}

namespace {

std::vector<Threshold> level_thresholds(const MatrixSpec& a, const WeightVector& v, const Scalar& eps, int level) {
  std::vector<Threshold> t(a.rows());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = Threshold::from(level_threshold(eps, v, i, a.cols(), level));
  return t;
}

// All rows strictly inside their thresholds. `indet` counts band hits.
Truth rows_inside(std::span<const Residual> res, const std::vector<Threshold>& t, std::uint64_t& indet) {
  Truth all = Truth::True;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const Truth c = abs_less(res[i], t[i]);
    if (c == Truth::Indeterminate) ++indet;
    all = all && c;
    if (all == Truth::False) return all;
  }
  return all;
}

void check_eps(const Scalar& eps) {
  if (!(eps.value() > 0)) throw UsageError("epsilon must be positive");
}

}  // namespace

Truth level_in_L(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha, const Scalar& eps, int level,
                 const Exec& exec, std::uint64_t* indeterminate) {
  check_shapes(a, v, alpha);
  check_eps(eps);
  floor_log2_levels(level);
  CenteredBox box(ball_bounds(alpha, pow2_radius(level), true));
  box.check_budget(exec.point_budget, "level_in_L");
  const auto rows = a.row_forms();
  const auto t = level_thresholds(a, v, eps, level);

  auto hit = detail::first_solution(box, exec, [&](std::span<const std::int64_t> q, std::uint64_t& indet) {
    if (detail::is_zero(q)) return Truth::False;
    return detail::rows_within(rows, t, q, false, indet);
  });
  if (indeterminate) *indeterminate = hit.indeterminate;
  if (hit.found) return Truth::False;
  return hit.maybe ? Truth::Indeterminate : Truth::True;
}

ProfileResult row_scaled_profile(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                 const Scalar& eps, int level, const Exec& exec) {
  check_shapes(a, v, alpha);
  check_eps(eps);
  floor_log2_levels(level);
  CenteredBox box(ball_bounds(alpha, pow2_radius(level), true));
  box.check_budget(exec.point_budget, "row_scaled_profile");
  const auto rows = a.row_forms();
  std::vector<long double> t(a.rows());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = level_threshold(eps, v, i, a.cols(), level).value();
  auto best = min_over(box, exec, [&](std::span<const std::int64_t> q) -> std::optional<long double> {
    if (detail::is_zero(q)) return std::nullopt;
    long double worst = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) worst = std::max(worst, std::fabs(rows[i].residual(q).value) / t[i]);
    return worst;
  });
  if (!best) throw UsageError("row_scaled_profile: empty ball");
  return {best->value, make_witness(a, alpha, best->q)};
}

LevelSetReport level_set_prefix(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                const Scalar& eps, int max_level, const Exec& exec) {
  check_shapes(a, v, alpha);
  check_eps(eps);
  const int L = floor_log2_levels(max_level);
  const std::size_t m = a.cols();

  // bounds[l][j]: coordinate bound of the 2^l ball, l = 0..L.
  std::vector<std::vector<std::int64_t>> bounds(L + 1);
  for (int l = 0; l <= L; ++l) bounds[l] = ball_bounds(alpha, pow2_radius(l), true);
  CenteredBox box(bounds[L]);
  box.check_budget(exec.point_budget, "level_set_prefix");

  const auto rows = a.row_forms();
  const auto expo = functional_exponents(a, v);
  std::vector<std::vector<Threshold>> thr(L + 1);
  for (int l = 1; l <= L; ++l) thr[l] = level_thresholds(a, v, eps, l);

  struct Acc {
    std::vector<char> solved, maybe;
    std::vector<std::uint64_t> indet;
    std::vector<long double> shell_min;
    std::vector<std::vector<std::int64_t>> shell_q;
    std::vector<std::uint64_t> shell_rank;
    std::vector<Residual> res;
    std::uint64_t comparisons = 0;
  };
  auto make = [&] {
    Acc acc;
    acc.solved.assign(L + 1, 0);
    acc.maybe.assign(L + 1, 0);
    acc.indet.assign(L + 1, 0);
    acc.shell_min.assign(L + 1, kInf);
    acc.shell_q.assign(L + 1, {});
    acc.shell_rank.assign(L + 1, 0);
    acc.res.resize(rows.size());
    return acc;
  };
  auto accs =
      detail::scan_chunks<Acc>(box, exec, make, [&](Acc& acc, std::span<const std::int64_t> q, std::uint64_t rank) {
        if (detail::is_zero(q)) return true;
        // Smallest level whose ball contains q.
        int lambda = 1;
        while (true) {
          bool inside = true;
          for (std::size_t j = 0; j < m && inside; ++j) inside = std::llabs(q[j]) <= bounds[lambda][j];
          if (inside) break;
          ++lambda;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) acc.res[i] = rows[i].residual(q);
        const long double val = profile_value(acc.res, expo);
        if (val < acc.shell_min[lambda]) {
          acc.shell_min[lambda] = val;
          acc.shell_q[lambda].assign(q.begin(), q.end());
          acc.shell_rank[lambda] = rank;
        }
        // Thresholds shrink with the level, so once q fails definitely it fails
        // at every later level too.
        for (int l = lambda; l <= L; ++l) {
          std::uint64_t ind = 0;
          const Truth r = rows_inside(acc.res, thr[l], ind);
          acc.comparisons += rows.size();
          acc.indet[l] += ind;
          if (r == Truth::False) break;
          if (r == Truth::True) acc.solved[l] = 1;
          if (r == Truth::Indeterminate) acc.maybe[l] = 1;
        }
        return true;
      });

  LevelSetReport rep;
  rep.epsilon = eps;
  rep.max_level = L;
  long double run_min = kInf;
  std::uint64_t run_rank = 0;
  std::vector<std::int64_t> run_q;
  for (int l = 1; l <= L; ++l) {
    bool solved = false;
    bool maybe = false;
    LevelRecord rec;
    rec.level = l;
    for (auto& acc : accs) {
      solved = solved || acc.solved[l];
      maybe = maybe || acc.maybe[l];
      rec.indeterminate += acc.indet[l];
      const bool better = acc.shell_min[l] < run_min ||
                          (acc.shell_min[l] == run_min && !acc.shell_q[l].empty() && acc.shell_rank[l] < run_rank);
      if (better) {
        run_min = acc.shell_min[l];
        run_rank = acc.shell_rank[l];
        run_q = acc.shell_q[l];
      }
    }
    rec.in_l = solved ? Truth::False : (maybe ? Truth::Indeterminate : Truth::True);
    rec.best_value = run_min;
    if (!run_q.empty()) rec.witness = make_witness(a, alpha, run_q);
    rep.indeterminate_total += rec.indeterminate;
    rep.levels.push_back(std::move(rec));
  }
  for (auto& acc : accs) rep.comparisons += acc.comparisons;
  return rep;
}

BadnessResult badness_functional(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                 const Scalar& q0, const Scalar& q1, const Exec& exec) {
  check_shapes(a, v, alpha);
  if (!(q0.value() > 0) || !(q1.value() > 0)) throw UsageError("window bounds must be positive");
  if (less(q0, q1) != Truth::True) throw UsageError("window requires Q0 < Q1");
  CenteredBox box(ball_bounds(alpha, q1, true));
  box.check_budget(exec.point_budget, "badness_functional");
  const auto inner = ball_bounds(alpha, q0, true);
  const auto rows = a.row_forms();
  const auto expo = functional_exponents(a, v);
  auto best = min_over(box, exec, [&](std::span<const std::int64_t> q) -> std::optional<long double> {
    bool below = true;
    for (std::size_t j = 0; j < q.size() && below; ++j) below = std::llabs(q[j]) <= inner[j];
    if (below) return std::nullopt;  // |q|_alpha < Q0
    return quasi_norm(q, alpha) * profile_value(rows, expo, q);
  });
  if (!best) throw UsageError("badness_functional: window [" + q0.str() + ", " + q1.str() + ") contains no q");
  return {best->value, make_witness(a, alpha, best->q)};
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::BadLike:
      return "bad-like at scale";
    case Verdict::NonSingularLike:
      return "non-singular-like at scale";
    case Verdict::SingularLike:
      return "singular-like at scale";
    case Verdict::Inconclusive:
      return "inconclusive at scale";
  }
  return "?";
}

Classification classify(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                        std::span<const Scalar> eps_grid, int max_level, const ClassifyOptions& options,
                        const Exec& exec) {
  if (eps_grid.empty()) throw UsageError("classify needs a nonempty epsilon grid");
  Classification out;
  bool any_cofinite = false;
  bool any_infinite = false;
  bool all_empty = true;
  for (const auto& eps : eps_grid) {
    EpsilonSummary s;
    s.prefix = level_set_prefix(a, v, alpha, eps, max_level, exec);
    const int L = s.prefix.max_level;
    for (const auto& rec : s.prefix.levels) s.true_count += rec.in_l == Truth::True;
    for (int l = L; l >= 1 && s.prefix.levels[l - 1].in_l == Truth::True; --l) ++s.trailing_true;
    const int first_top = L / 2 + 1;
    s.top_half_size = L - first_top + 1;
    for (int l = first_top; l <= L; ++l) s.top_half_true += s.prefix.levels[l - 1].in_l == Truth::True;
    s.cofinite = s.trailing_true >= 1 && s.trailing_true >= std::ceil(options.tail_fraction * L);
    s.empty_tail = s.top_half_true == 0;
    s.infinite_looking = s.top_half_true >= 1 && s.top_half_true >= options.top_half_fraction * s.top_half_size;
    any_cofinite = any_cofinite || s.cofinite;
    any_infinite = any_infinite || s.infinite_looking;
    all_empty = all_empty && s.empty_tail;
    out.indeterminate_total += s.prefix.indeterminate_total;
    out.comparisons += s.prefix.comparisons;
    out.per_epsilon.push_back(std::move(s));
  }
  if (any_cofinite) {
    out.verdict = Verdict::BadLike;
  } else if (any_infinite) {
    out.verdict = Verdict::NonSingularLike;
  } else if (all_empty) {
    out.verdict = Verdict::SingularLike;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

}  // namespace twistlab
