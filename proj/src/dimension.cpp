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

#include "twistlab/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "enumeration.hpp"
#include "rects.hpp"
#include "twistlab/errors.hpp"

namespace twistlab {

namespace {

const Scalar kZero = Scalar::integer(0);

Scalar of(std::size_t k) { return Scalar::integer(static_cast<std::int64_t>(k)); }

bool ge(const Scalar& x, const Scalar& y) {
  if (x.is_exact() && y.is_exact()) return x.rational() >= y.rational();
  return x.value() >= y.value() - kEta;
}

bool same(const Scalar& x, const Scalar& y) {
  if (x.is_exact() && y.is_exact()) return x.rational() == y.rational();
  return std::fabs(x.value() - y.value()) <= kEta;
}

bool lt(const Scalar& x, const Scalar& y) { return !ge(x, y); }

const Scalar& min_of(std::span<const Scalar> xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (lt(xs[i], xs[best])) best = i;
  }
  return xs[best];
}

const Scalar& max_of(std::span<const Scalar> xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (lt(xs[best], xs[i])) best = i;
  }
  return xs[best];
}

std::string index_name(const char* sym, std::size_t j) { return std::string(sym) + "_" + std::to_string(j + 1); }

}  // namespace

DimensionReport mtprr_lower_bound(std::span<const Scalar> a, std::span<const Scalar> t) {
  if (a.empty() || a.size() != t.size()) throw UsageError("a and t must be nonempty and of equal length");
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (!(a[j].value() > 0)) throw UsageError(index_name("a", j) + " must be positive, got " + a[j].str());
    if (t[j].value() < 0) throw UsageError(index_name("t", j) + " must be nonnegative, got " + t[j].str());
  }
  std::vector<Scalar> top(n);
  for (std::size_t j = 0; j < n; ++j) top[j] = a[j] + t[j];

  std::vector<Scalar> pivots;
  auto add = [&](const Scalar& p) {
    for (const auto& q : pivots) {
      if (same(p, q)) return;
    }
    pivots.push_back(p);
  };
  for (std::size_t j = 0; j < n; ++j) add(a[j]);
  for (std::size_t j = 0; j < n; ++j) add(top[j]);
  std::stable_sort(pivots.begin(), pivots.end(), [](const Scalar& x, const Scalar& y) { return lt(x, y); });

  DimensionReport rep;
  rep.mode = "mtprr";
  for (const auto& p : pivots) {
    PivotRow row;
    row.pivot = p;
    Scalar num = kZero;
    for (std::size_t j = 0; j < n; ++j) {
      const int id = static_cast<int>(j + 1);
      if (ge(a[j], p)) {
        row.k1.push_back(id);
      } else if (ge(p, top[j])) {
        row.k2.push_back(id);
        num = num - t[j];
      } else {
        row.k3.push_back(id);
        num = num + a[j];
      }
    }
    row.d = of(row.k1.size() + row.k2.size()) + num / p;
    rep.pivots.push_back(std::move(row));
  }
  for (std::size_t i = 1; i < rep.pivots.size(); ++i) {
    if (lt(rep.pivots[i].d, rep.pivots[rep.argmin].d)) rep.argmin = i;
  }
  rep.value = rep.pivots[rep.argmin].d;
  return rep;
}

Scalar upper_cover_exponent(std::size_t m, std::span<const Scalar> tau, std::size_t j) {
  if (j < 1 || j > tau.size()) {
    throw UsageError("index j = " + std::to_string(j) + " must lie in [1, " + std::to_string(tau.size()) + "]");
  }
  const Scalar& tj = tau[j - 1];
  if (!(tj.value() > 0)) throw UsageError(index_name("tau", j - 1) + " must be positive");
  Scalar num = of(m);
  for (const auto& ti : tau) {
    if (lt(ti, tj)) num = num + (tj - ti);
  }
  return num / tj;
}

DimensionReport dim_unweighted(std::size_t m, std::size_t n, std::span<const Scalar> tau) {
  if (m < 1 || n < 1) throw UsageError("m and n must be positive");
  if (tau.size() != n) {
    throw UsageError("tau has " + std::to_string(tau.size()) + " entries, expected n = " + std::to_string(n));
  }
  const Scalar mn = Scalar(Rational(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n)));
  ConditionCheck hyp{"tau_j > m/n for every j", min_of(tau), mn, lt(mn, min_of(tau))};
  for (std::size_t j = 0; j < n; ++j) {
    if (!lt(mn, tau[j])) {
      throw UsageError("hypothesis tau_j > m/n violated: " + index_name("tau", j) + " = " + tau[j].str() +
                       " <= m/n = " + mn.str());
    }
  }
  std::vector<Scalar> a(n, mn), t(n);
  for (std::size_t j = 0; j < n; ++j) t[j] = tau[j] - mn;
  DimensionReport rep = mtprr_lower_bound(a, t);
  rep.mode = "unweighted";
  Scalar s = upper_cover_exponent(m, tau, 1);
  for (std::size_t j = 2; j <= n; ++j) {
    const Scalar c = upper_cover_exponent(m, tau, j);
    if (lt(c, s)) s = c;
  }
  rep.cross_check = same(s, rep.value);
  rep.value = s;
  rep.conditions.push_back(hyp);
  return rep;
}

DimensionReport dim_weighted_2d(std::size_t m, std::span<const Scalar> v, std::span<const Scalar> tau) {
  if (m < 1) throw UsageError("m must be positive");
  if (v.size() != 2 || tau.size() != 2) throw UsageError("the weighted formula needs n = 2: two v and two tau entries");
  const WeightVector wv(std::vector<Scalar>(v.begin(), v.end()));
  const Scalar half_m = Scalar(Rational(static_cast<std::int64_t>(m), 2));
  std::vector<Scalar> a(2), t(2);
  std::vector<ConditionCheck> checks;
  for (std::size_t i = 0; i < 2; ++i) {
    a[i] = v[i] * half_m;
    const bool ok = ge(tau[i], a[i]);
    checks.push_back({"tau_" + std::to_string(i + 1) + " >= v_" + std::to_string(i + 1) + " m/n", tau[i], a[i], ok});
    if (!ok) {
      throw UsageError("hypothesis " + checks.back().name + " violated: " + tau[i].str() + " < " + a[i].str());
    }
    t[i] = tau[i] - a[i];
  }
  const Scalar& vmin = min_of(v);
  const Scalar& vmax = max_of(v);
  const Scalar& tmin = min_of(tau);
  const Scalar& tmax = max_of(tau);
  const Scalar first = vmin * of(m) / (tmin * of(2));
  const Scalar second = vmin / vmax;
  const Scalar lhs = lt(first, second) ? first : second;
  const Scalar rhs = (of(m) - tmin) / tmax;
  const std::string name = "min{min(v) m/(n min(tau)), min(v)/max(v)} >= (m - min(tau))/max(tau)";
  checks.push_back({name, lhs, rhs, ge(lhs, rhs)});
  if (!checks.back().holds) {
    throw UsageError("weighted condition " + name + " fails: min{" + first.str() + ", " + second.str() +
                     "} = " + lhs.str() + " < " + rhs.str());
  }
  const Scalar s = (of(m) + tmax - tmin) / tmax;
  // With min(tau) > m and unequal tau, the pivot P = min(tau) undercuts s.
  const Scalar pivot_value = of(m) / tmin;
  checks.push_back({"m/min(tau) >= (m + max(tau) - min(tau))/max(tau)", pivot_value, s, ge(pivot_value, s)});
  if (!checks.back().holds) {
    throw UsageError(
        "weighted closed form needs m/min(tau) >= (m + max(tau) - min(tau))/max(tau), i.e. min(tau) <= m "
        "or tau_1 = tau_2: " +
        pivot_value.str() + " < " + s.str());
  }
  DimensionReport rep = mtprr_lower_bound(a, t);
  rep.mode = "weighted2d";
  rep.cross_check = same(s, rep.value);
  rep.value = s;
  rep.conditions = std::move(checks);
  return rep;
}

const char* to_string(BoxCover c) { return c == BoxCover::Union ? "union" : "shell"; }

namespace {

using Range = std::pair<std::int64_t, std::int64_t>;

// Boxes [k/K, (k+1)/K) meeting the open torus interval c +- r.
void boxes_met(double c, double r, std::int64_t k_count, std::vector<Range>& out) {
  out.clear();
  if (r >= 0.5) {
    out.emplace_back(0, k_count - 1);
    return;
  }
  const auto kd = static_cast<double>(k_count);
  for (int s = -1; s <= 1; ++s) {
    const double lo = std::max(0.0, c + s - r);
    const double hi = std::min(1.0, c + s + r);
    if (!(lo < hi)) continue;
    auto k_lo = static_cast<std::int64_t>(std::floor(lo * kd));
    auto k_hi = static_cast<std::int64_t>(std::ceil(hi * kd)) - 1;
    k_lo = std::max<std::int64_t>(k_lo, 0);
    k_hi = std::min<std::int64_t>(k_hi, k_count - 1);
    if (k_lo <= k_hi) out.emplace_back(k_lo, k_hi);
  }
}

}  // namespace

BoxDimReport box_dim_estimate(const MatrixSpec& a, const ApproxTuple& psi, const WeightVector& alpha,
                              const Scalar& q_max, std::span<const double> deltas, BoxCover mode, const Exec& exec) {
  if (psi.size() != a.rows()) throw UsageError("Psi must have one function per matrix row");
  if (deltas.empty()) throw UsageError("box_dim_estimate needs at least one box size");
  std::vector<std::int64_t> ks;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double d = deltas[i];
    if (!(d > 0) || d > 1) throw UsageError("box sizes must lie in (0, 1]");
    const auto k = std::llround(1.0 / d);
    if (std::fabs(k * d - 1.0) > 1e-9)
      throw UsageError("box size " + std::to_string(d) + " is not 1/K for an integer K");
    if (i > 0 && !(d < deltas[i - 1])) throw UsageError("box sizes must decrease");
    ks.push_back(k);
  }
  const std::size_t n = a.rows();
  detail::CollectSpec spec;
  spec.cutoffs = {q_max};
  spec.radii = [&](long double r, double* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(psi.eval(i, r));
  };
  const auto rects = detail::collect_rects(a, alpha, spec, exec);

  BoxDimReport rep;
  rep.mode = mode;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const std::int64_t kc = ks[di];
    const double delta = 1.0 / static_cast<double>(kc);
    unsigned __int128 total = 1;
    for (std::size_t j = 0; j < n; ++j) {
      total *= static_cast<unsigned __int128>(kc);
      if (total > exec.point_budget) {
        throw ResourceError("box count at delta = " + std::to_string(delta) + " exceeds the point budget");
      }
    }
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(total), 0);
    BoxCount bc;
    bc.delta = delta;
    bc.total = static_cast<std::uint64_t>(total);
    std::vector<std::vector<Range>> axes(n);
    for (std::size_t k = 0; k < rects.size(); ++k) {
      if (mode == BoxCover::Shell) {
        const double rmin = *std::min_element(rects.r(k), rects.r(k) + n);
        if (!(rmin >= delta && rmin < 2 * delta)) continue;
      }
      ++bc.rectangles;
      bool empty = false;
      for (std::size_t j = 0; j < n && !empty; ++j) {
        boxes_met(rects.c(k)[j], rects.r(k)[j], kc, axes[j]);
        empty = axes[j].empty();
      }
      if (empty) continue;
      std::vector<std::size_t> ri(n, 0);
      std::vector<std::int64_t> idx(n);
      for (std::size_t j = 0; j < n; ++j) idx[j] = axes[j][0].first;
      while (true) {
        std::uint64_t flat = 0;
        for (std::size_t j = 0; j < n; ++j)
          flat = flat * static_cast<std::uint64_t>(kc) + static_cast<std::uint64_t>(idx[j]);
        hit[flat] = 1;
        bool more = false;
        for (std::size_t j = n; j-- > 0;) {
          if (idx[j] < axes[j][ri[j]].second) {
            ++idx[j];
            more = true;
            break;
          }
          if (ri[j] + 1 < axes[j].size()) {
            idx[j] = axes[j][++ri[j]].first;
            more = true;
            break;
          }
          ri[j] = 0;
          idx[j] = axes[j][0].first;
        }
        if (!more) break;
      }
    }
    for (auto h : hit) bc.boxes += h;
    if (bc.boxes == bc.total) {
      bc.excluded = true;
      bc.reason = "saturated";
    } else if (bc.boxes <= 2) {
      bc.excluded = true;
      bc.reason = "trivial";
    }
    rep.counts.push_back(std::move(bc));
  }

  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<long double, long double>> pts;
  for (const auto& bc : rep.counts) {
    if (bc.excluded) continue;
    pts.emplace_back(std::log(1.0L / bc.delta), std::log(static_cast<long double>(bc.boxes)));
  }
  rep.used = pts.size();
  if (pts.size() < 2) {
    const bool all_sat =
        std::all_of(rep.counts.begin(), rep.counts.end(), [](const BoxCount& c) { return c.reason == "saturated"; });
    const bool all_triv =
        std::all_of(rep.counts.begin(), rep.counts.end(), [](const BoxCount& c) { return c.reason == "trivial"; });
    if (all_sat) {
      rep.slope = static_cast<long double>(n);
      rep.note = "every box size saturated; slope set to n";
      return rep;
    }
    if (all_triv) {
      rep.slope = 0;
      rep.note = "every box size trivial; slope set to 0";
      return rep;
    }
    pts.clear();
    for (const auto& bc : rep.counts) {
      if (bc.boxes > 0) pts.emplace_back(std::log(1.0L / bc.delta), std::log(static_cast<long double>(bc.boxes)));
    }
    rep.note = "fewer than two usable box sizes; fit uses all nonzero counts";
    if (pts.size() < 2) return rep;
  }
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto cnt = static_cast<long double>(pts.size());
  const long double den = cnt * sxx - sx * sx;
  rep.slope = den == 0 ? 0 : (cnt * sxy - sx * sy) / den;
  rep.intercept = (sy - rep.slope * sx) / cnt;
  long double ss = 0;
  for (const auto& [x, y] : pts) {
    const long double e = y - (rep.intercept + rep.slope * x);
    ss += e * e;
  }
  rep.residual = std::sqrt(ss / cnt);
  return rep;
}

}  // namespace twistlab
