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

#include "twistlab/measure.hpp"

#include <algorithm>
#include <cmath>

#include "enumeration.hpp"
#include "rects.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/transference.hpp"

namespace twistlab {

namespace {

void check_psi(const ApproxTuple& psi, std::size_t n) {
  if (psi.size() != n) {
    throw UsageError("Psi has " + std::to_string(psi.size()) + " functions but n = " + std::to_string(n));
  }
}

bool inside_bounds(std::span<const std::int64_t> q, const std::vector<std::int64_t>& b) {
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (std::llabs(q[j]) > b[j]) return false;
  }
  return true;
}

}  // namespace

std::vector<long double> dyadic_series(const ApproxTuple& psi, std::size_t m, std::span<const int> levels,
                                       std::size_t count) {
  for (std::size_t k = 1; k < levels.size(); ++k) {
    if (levels[k] <= levels[k - 1]) throw UsageError("levels must be strictly increasing");
  }
  std::vector<long double> out;
  long double sum = 0;
  const std::size_t upto = std::min(count, levels.size());
  for (std::size_t k = 0; k < upto; ++k) {
    const long double r = std::exp2(static_cast<long double>(levels[k]));
    sum += std::exp2(static_cast<long double>(m) * levels[k]) * psi.product(r);
    out.push_back(sum);
  }
  return out;
}

std::vector<long double> radial_series(const ApproxTuple& psi, std::size_t m, std::uint64_t cutoff) {
  if (cutoff < 1) throw UsageError("radial series cutoff must be >= 1");
  std::vector<long double> out;
  out.reserve(cutoff);
  long double sum = 0;
  for (std::uint64_t r = 1; r <= cutoff; ++r) {
    const auto rr = static_cast<long double>(r);
    sum += std::pow(rr, static_cast<long double>(m) - 1) * psi.product(rr);
    out.push_back(sum);
  }
  return out;
}

long double growth_exponent(std::span<const long double> s) {
  const std::size_t start = s.size() / 2;
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t cnt = 0;
  for (std::size_t k = start; k < s.size(); ++k) {
    if (!(s[k] > 0)) continue;
    const long double x = std::log(static_cast<long double>(k + 1));
    const long double y = std::log(s[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt < 2) return 0;
  const long double den = cnt * sxx - sx * sx;
  return den == 0 ? 0 : (cnt * sxy - sx * sy) / den;
}

long double hypothesis_ratio(const ApproxTuple& psi, const WeightVector& v, std::size_t m, int max_level) {
  check_psi(psi, v.size());
  const auto n = static_cast<long double>(v.size());
  long double worst = 0;
  for (int l = 0; l <= max_level; ++l) {
    const long double r = std::exp2(static_cast<long double>(l));
    for (std::size_t i = 0; i < v.size(); ++i) {
      worst = std::max(worst, psi.eval(i, r) * std::pow(r, v.value(i) * static_cast<long double>(m) / n));
    }
  }
  return worst;
}

BorelCantelliReport borel_cantelli(const ApproxTuple& psi, const WeightVector& alpha, int shells, const Exec& exec) {
  if (shells < 1 || shells > 40) throw UsageError("shell count must lie in [1, 40]");
  BorelCantelliReport rep;
  rep.shells = shells;
  const std::size_t m = alpha.size();
  const std::size_t n = psi.size();
  const auto ml = static_cast<long double>(m);
  rep.constant = ml * std::exp2(ml + 1) * std::pow(3.0L, ml - 1) * (1 - std::exp2(-alpha.min_value()));
  const std::uint64_t top = std::uint64_t{1} << (shells + 1);
  for (const auto s : radial_series(psi, m, top)) rep.series_sum = s;
  rep.bound = rep.constant * std::exp2(static_cast<long double>(n) + 1) * rep.series_sum;

  const auto outer = ball_bounds(alpha, Scalar(Rational(static_cast<std::int64_t>(top))), false);
  const auto inner = ball_bounds(alpha, Scalar::integer(2), false);
  detail::CenteredBox box(outer);
  box.check_budget(exec.point_budget, "borel_cantelli");
  auto parts = detail::scan_chunks<long double>(
      box, exec, [] { return 0.0L; },
      [&](long double& acc, std::span<const std::int64_t> q, std::uint64_t) {
        if (inside_bounds(q, inner)) return true;
        long double vol = 1;
        const long double r = quasi_norm(q, alpha);
        for (std::size_t i = 0; i < n; ++i) vol *= std::min(1.0L, 2 * psi.eval(i, r));
        acc += vol;
        return true;
      });
  for (auto p : parts) rep.volume_sum += p;
  return rep;
}

HitCount hit_count(std::span<const Scalar> b, const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                   const Scalar& q_max, std::size_t witness_cap, const Exec& exec) {
  check_psi(psi, a.rows());
  if (alpha.size() != a.cols()) throw UsageError("alpha dimension does not match the matrix");
  detail::CenteredBox box(ball_bounds(alpha, q_max, false));
  box.check_budget(exec.point_budget, "hit_count");
  const auto rows = a.row_forms(b);
  struct Acc {
    std::uint64_t count = 0;
    std::uint64_t indet = 0;
    std::vector<std::vector<std::int64_t>> first;
  };
  auto parts = detail::scan_chunks<Acc>(
      box, exec, [] { return Acc{}; },
      [&](Acc& acc, std::span<const std::int64_t> q, std::uint64_t) {
        if (detail::is_zero(q)) return true;
        const long double r = quasi_norm(q, alpha);
        Truth all = Truth::True;
        for (std::size_t i = 0; i < rows.size() && all != Truth::False; ++i) {
          Threshold t;
          t.value = psi.eval(i, r);
          all = all && abs_less(rows[i].residual(q), t);
        }
        if (all == Truth::Indeterminate) ++acc.indet;
        if (all == Truth::True) {
          ++acc.count;
          if (acc.first.size() < witness_cap) acc.first.emplace_back(q.begin(), q.end());
        }
        return true;
      });
  HitCount out;
  for (auto& p : parts) {
    out.count += p.count;
    out.indeterminate += p.indet;
    for (auto& q : p.first) {
      if (out.witnesses.size() >= witness_cap) break;
      ApproxWitness w;
      w.q = q;
      for (const auto& row : rows) {
        const Residual r = row.residual(q);
        w.p.push_back(r.p);
        w.residuals.push_back(r.value);
      }
      w.qnorm = quasi_norm(std::span<const std::int64_t>(q), alpha);
      out.witnesses.push_back(std::move(w));
    }
  }
  return out;
}

const char* to_string(Estimator e) { return e == Estimator::Grid ? "grid" : "monte-carlo"; }

EstimatorConfig default_estimator(std::size_t n, std::uint64_t seed) {
  EstimatorConfig e;
  e.method = n <= 2 ? Estimator::Grid : Estimator::MonteCarlo;
  e.seed = seed;
  return e;
}

namespace {

std::vector<std::uint64_t> cover_counts(const detail::RectSet& rects, std::size_t tiers, const detail::Domain& dom,
                                        const EstimatorConfig& est, const Exec& exec, std::uint64_t* total) {
  if (est.method == Estimator::Grid) return detail::grid_cover(rects, tiers, dom, est.grid_step, exec, total);
  *total = est.samples;
  return detail::monte_carlo_cover(rects, tiers, dom, est.samples, est.seed, exec);
}

}  // namespace

std::vector<MeasureEstimate> limsup_measure(const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                                            std::span<const Scalar> cutoffs, const EstimatorConfig& est,
                                            const Scalar& tail_start, const Exec& exec) {
  check_psi(psi, a.rows());
  if (cutoffs.empty()) throw UsageError("limsup_measure needs at least one cutoff Q");
  if (tail_start.value() < 0) throw UsageError("tail start must be >= 0");
  detail::CollectSpec spec;
  spec.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  if (tail_start.value() > 0) spec.exclude_le = tail_start;
  spec.radii = [&](long double r, double* out) {
    for (std::size_t i = 0; i < psi.size(); ++i) out[i] = static_cast<double>(psi.eval(i, r));
  };
  const auto rects = detail::collect_rects(a, alpha, spec, exec);
  std::uint64_t total = 0;
  const auto counts = cover_counts(rects, cutoffs.size(), detail::Domain::torus(a.rows()), est, exec, &total);
  std::vector<MeasureEstimate> out;
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    MeasureEstimate e;
    e.q = cutoffs[k].value();
    e.method = est.method;
    e.value = static_cast<long double>(counts[k]) / static_cast<long double>(total);
    e.seed = est.seed;
    if (est.method == Estimator::Grid) {
      e.resolution = est.grid_step;
    } else {
      e.resolution = static_cast<long double>(est.samples);
      e.half_width = detail::wilson_half_width(counts[k], total);
    }
    out.push_back(e);
  }
  return out;
}

EquidistResult equidist_ratio(const MatrixSpec& a, const WeightVector& alpha, const TorusRectangle& box,
                              const Scalar& big_n, const Exec& exec) {
  if (alpha.size() != a.cols()) throw UsageError("alpha dimension does not match the matrix");
  if (box.size() != a.rows()) throw UsageError("box dimension does not match the matrix rows");
  if (a.rows() > 16) throw UsageError("equidist_ratio supports at most 16 rows");
  detail::CenteredBox cbox(ball_bounds(alpha, big_n, false));
  cbox.check_budget(exec.point_budget, "equidist_ratio");
  const auto rows = a.row_forms();
  auto parts = detail::scan_chunks<std::uint64_t>(
      cbox, exec, [] { return std::uint64_t{0}; },
      [&](std::uint64_t& acc, std::span<const std::int64_t> q, std::uint64_t) {
        long double x[16];
        for (std::size_t i = 0; i < rows.size(); ++i) {
          const long double r = rows[i].residual(q).value;
          x[i] = r < 0 ? r + 1 : r;
        }
        acc += rect_contains(box, std::span<const long double>(x, rows.size()));
        return true;
      });
  EquidistResult out;
  for (auto p : parts) out.in_box += p;
  out.total = cbox.size();
  out.ratio = static_cast<long double>(out.in_box) / static_cast<long double>(out.total);
  return out;
}

Scalar UbiquityConfig::upper(std::size_t k) const { return c2 * Scalar(Rational(std::int64_t{1} << levels.at(k))); }

Scalar UbiquityConfig::lower(std::size_t k) const { return c3 * upper(k); }

long double UbiquityConfig::rho(std::size_t i, long double r) const {
  const long double e = v.at(i).value() * static_cast<long double>(m) / static_cast<long double>(n);
  return eps.value() * std::pow(c2.value(), 1 + e) * std::pow(r, -e);
}

std::vector<long double> UbiquityConfig::rho_at(std::size_t k) const {
  std::vector<long double> out;
  const WeightVector w(v);
  for (std::size_t i = 0; i < n; ++i) out.push_back((c2 * level_threshold(eps, w, i, m, levels.at(k))).value());
  return out;
}

UbiquityConfig make_ubiquity_config(const MatrixSpec& a, const WeightVector& v, const WeightVector& alpha,
                                    const Scalar& eps, int max_level, const UbiquityOptions& options,
                                    const Exec& exec) {
  UbiquityConfig cfg;
  cfg.eps = eps;
  cfg.n = a.rows();
  cfg.m = a.cols();
  cfg.v = v.exponents();
  cfg.c2 = compute_c2(eps, v.exponents(), alpha.exponents());
  const auto n = static_cast<int>(cfg.n);
  const auto m = static_cast<int>(cfg.m);
  const Scalar inner = Scalar(Rational(1, std::int64_t{1} << (n + 2))) * eps.pow_int(-n) * cfg.c2.pow_int(-(n + m));
  cfg.c3_bound = inner.pow(Scalar(Rational(1, m)));
  if (options.c3) {
    cfg.c3 = *options.c3;
  } else {
    cfg.c3 = Scalar(Rational(1, 2)) * cfg.c3_bound;
  }
  if (!(cfg.c3.value() > 0) || !(cfg.c3.value() < 1)) throw UsageError("c3 must lie in (0, 1)");
  cfg.admissible = less(cfg.c3, cfg.c3_bound) == Truth::True;
  if (!cfg.admissible && !options.allow_inadmissible) {
    throw UsageError("c3 = " + cfg.c3.str() +
                     " violates c3 < (2^{-(n+2)} eps^{-n} c2^{-(n+m)})^{1/m} = " + cfg.c3_bound.str());
  }
  const auto prefix = level_set_prefix(a, v, alpha, eps, max_level, exec);
  for (const auto& rec : prefix.levels) {
    if (rec.in_l == Truth::True) cfg.levels.push_back(rec.level);
  }
  return cfg;
}

CoverageResult ubiquity_coverage(const MatrixSpec& a, const WeightVector& alpha, const UbiquityConfig& cfg,
                                 std::size_t k, const TorusRectangle& box, const EstimatorConfig& est,
                                 const Exec& exec) {
  if (k >= cfg.size()) {
    throw UsageError("level index k = " + std::to_string(k) + " is outside the " + std::to_string(cfg.size()) +
                     " available levels");
  }
  if (box.size() != a.rows()) throw UsageError("box dimension does not match the matrix rows");
  const auto rho = cfg.rho_at(k);
  detail::CollectSpec spec;
  spec.cutoffs = {cfg.upper(k)};
  spec.exclude_lt = cfg.lower(k);
  spec.radii = [&](long double, double* out) {
    for (std::size_t i = 0; i < rho.size(); ++i) out[i] = static_cast<double>(rho[i]);
  };
  const auto rects = detail::collect_rects(a, alpha, spec, exec);
  detail::Domain dom;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double r = std::min(0.5L, box.radii[i]);
    dom.origin.push_back(static_cast<double>(box.center[i]) - r);
    dom.span.push_back(2 * r);
  }
  CoverageResult out;
  out.resonant_points = rects.size();
  std::uint64_t total = 0;
  const auto counts = cover_counts(rects, 1, dom, est, exec, &total);
  out.cells = total;
  out.fraction = static_cast<long double>(counts[0]) / static_cast<long double>(total);
  if (est.method == Estimator::MonteCarlo) out.half_width = detail::wilson_half_width(counts[0], total);
  return out;
}

}  // namespace twistlab
