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

#include "rects.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>

#include "enumeration.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/random.hpp"

namespace twistlab::detail {

namespace {

constexpr std::uint16_t kUncovered = std::numeric_limits<std::uint16_t>::max();
constexpr std::uint64_t kMaxRects = std::uint64_t{1} << 26;
constexpr std::uint64_t kBlock = 65536;

bool inside_bounds(std::span<const std::int64_t> q, const std::vector<std::int64_t>& b) {
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (std::llabs(q[j]) > b[j]) return false;
  }
  return true;
}

double torus_gap(double x, double c) {
  double d = std::fabs(x - c);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

using Range = std::pair<std::int64_t, std::int64_t>;

// Grid points o + (k + 1/2) h, k in [0, count), lying within torus distance
// < r of c, as merged index ranges.
void axis_points(double c, double r, double o, double h, std::int64_t count, std::vector<Range>& out) {
  out.clear();
  if (r > 0.5) {
    out.emplace_back(0, count - 1);
    return;
  }
  for (int s = -2; s <= 2; ++s) {
    const double cs = c + s;
    auto test = [&](std::int64_t k) { return std::fabs(o + (static_cast<double>(k) + 0.5) * h - cs) < r; };
    std::int64_t lo = static_cast<std::int64_t>(std::floor((cs - r - o) / h - 0.5)) - 1;
    std::int64_t hi = static_cast<std::int64_t>(std::ceil((cs + r - o) / h - 0.5)) + 1;
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, count - 1);
    while (lo <= hi && !test(lo)) ++lo;
    while (hi >= lo && !test(hi)) --hi;
    if (lo <= hi) out.emplace_back(lo, hi);
  }
  std::sort(out.begin(), out.end());
  std::size_t w = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w > 0 && out[i].first <= out[w - 1].second + 1) {
      out[w - 1].second = std::max(out[w - 1].second, out[i].second);
    } else {
      out[w++] = out[i];
    }
  }
  out.resize(w);
}

// Buckets [o + k w, o + (k+1) w) meeting the window of c +- r on the torus;
// `full` marks buckets contained in it.
struct BucketHit {
  std::int64_t k;
  bool full;
};

void axis_buckets(double c, double r, double o, double w, std::int64_t count, std::vector<BucketHit>& out) {
  out.clear();
  if (r > 0.5) {
    for (std::int64_t k = 0; k < count; ++k) out.push_back({k, true});
    return;
  }
  for (int s = -2; s <= 2; ++s) {
    const double lo_x = c + s - r;
    const double hi_x = c + s + r;
    std::int64_t lo = static_cast<std::int64_t>(std::floor((lo_x - o) / w)) - 1;
    std::int64_t hi = static_cast<std::int64_t>(std::floor((hi_x - o) / w)) + 1;
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, count - 1);
    for (std::int64_t k = lo; k <= hi; ++k) {
      const double a = o + static_cast<double>(k) * w;
      const double b = a + w;
      if (b <= lo_x || a >= hi_x) continue;
      const bool full = a > lo_x && b < hi_x;
      out.push_back({k, full});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const BucketHit& x, const BucketHit& y) { return x.k != y.k ? x.k < y.k : x.full > y.full; });
  std::size_t n = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (n > 0 && out[n - 1].k == out[i].k) continue;  // full listed first
    out[n++] = out[i];
  }
  out.resize(n);
}

void atomic_min(std::uint16_t& slot, std::uint16_t v) {
  std::atomic_ref<std::uint16_t> ref(slot);
  std::uint16_t cur = ref.load(std::memory_order_relaxed);
  while (v < cur && !ref.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
  }
}

}  // namespace

Domain Domain::torus(std::size_t n) { return Domain{std::vector<double>(n, 0.0), std::vector<double>(n, 1.0)}; }

bool rect_has(const RectSet& rects, std::size_t k, const double* x) {
  const double* c = rects.c(k);
  const double* r = rects.r(k);
  for (std::size_t i = 0; i < rects.n; ++i) {
    if (!(torus_gap(x[i], c[i]) < r[i])) return false;
  }
  return true;
}

RectSet collect_rects(const MatrixSpec& a, const WeightVector& alpha, const CollectSpec& spec, const Exec& exec) {
  if (spec.cutoffs.empty()) throw UsageError("at least one norm cutoff is required");
  if (spec.cutoffs.size() >= kUncovered) throw UsageError("too many norm cutoffs");
  if (alpha.size() != a.cols()) throw UsageError("alpha dimension does not match the matrix");
  for (std::size_t k = 1; k < spec.cutoffs.size(); ++k) {
    if (less(spec.cutoffs[k - 1], spec.cutoffs[k]) != Truth::True) throw UsageError("norm cutoffs must increase");
  }
  std::vector<std::vector<std::int64_t>> tb;
  for (const auto& q : spec.cutoffs) tb.push_back(ball_bounds(alpha, q, false));
  CenteredBox box(tb.back());
  box.check_budget(std::min(exec.point_budget, kMaxRects), "rectangle collection");

  std::optional<std::vector<std::int64_t>> ble, blt;
  if (spec.exclude_le && spec.exclude_le->value() > 0) ble = ball_bounds(alpha, *spec.exclude_le, false);
  if (spec.exclude_lt && spec.exclude_lt->value() > 0) blt = ball_bounds(alpha, *spec.exclude_lt, true);

  const std::size_t n = a.rows();
  const auto rows = a.row_forms();
  auto parts = scan_chunks<RectSet>(
      box, exec,
      [n] {
        RectSet s;
        s.n = n;
        return s;
      },
      [&](RectSet& part, std::span<const std::int64_t> q, std::uint64_t) {
        if (is_zero(q)) return true;
        if (ble && inside_bounds(q, *ble)) return true;
        if (blt && inside_bounds(q, *blt)) return true;
        std::uint16_t tier = 0;
        while (!inside_bounds(q, tb[tier])) ++tier;
        const long double norm = quasi_norm(q, alpha);
        for (const auto& row : rows) {
          const long double r = row.residual(q).value;
          double x = static_cast<double>(r < 0 ? r + 1 : r);
          if (x >= 1.0) x = 0.0;
          part.center.push_back(x);
        }
        const std::size_t at = part.radius.size();
        part.radius.resize(at + n);
        spec.radii(norm, part.radius.data() + at);
        part.qnorm.push_back(static_cast<double>(norm));
        part.tier.push_back(tier);
        return true;
      });
  RectSet all;
  all.n = n;
  for (auto& p : parts) {
    all.center.insert(all.center.end(), p.center.begin(), p.center.end());
    all.radius.insert(all.radius.end(), p.radius.begin(), p.radius.end());
    all.qnorm.insert(all.qnorm.end(), p.qnorm.begin(), p.qnorm.end());
    all.tier.insert(all.tier.end(), p.tier.begin(), p.tier.end());
  }
  return all;
}

std::vector<std::uint64_t> grid_cover(const RectSet& rects, std::size_t tiers, const Domain& dom, double step,
                                      const Exec& exec, std::uint64_t* cells) {
  const std::size_t n = rects.n;
  if (!(step > 0) || step > 1) throw UsageError("grid step must lie in (0, 1]");
  std::vector<std::int64_t> count(n);
  std::vector<double> h(n);
  unsigned __int128 total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    count[j] = std::max<std::int64_t>(1, std::llround(dom.span[j] / step));
    h[j] = dom.span[j] / static_cast<double>(count[j]);
    total *= static_cast<unsigned __int128>(count[j]);
    if (total > exec.point_budget) {
      throw ResourceError("grid with step " + std::to_string(step) + " in dimension " + std::to_string(n) +
                          " exceeds the point budget of " + std::to_string(exec.point_budget));
    }
  }
  const auto ncell = static_cast<std::uint64_t>(total);
  if (cells) *cells = ncell;
  std::vector<std::uint16_t> cover(ncell, kUncovered);

  auto ranges = split_range(rects.size(), kMaxChunks);
  parallel_for(ranges.size(), exec.workers, [&](std::size_t t) {
    std::vector<std::vector<Range>> axes(n);
    std::vector<std::int64_t> idx(n);
    for (std::size_t k = ranges[t].first; k < ranges[t].second; ++k) {
      bool empty = false;
      for (std::size_t j = 0; j < n && !empty; ++j) {
        axis_points(rects.c(k)[j], rects.r(k)[j], dom.origin[j], h[j], count[j], axes[j]);
        empty = axes[j].empty();
      }
      if (empty) continue;
      const std::uint16_t tier = rects.tier[k];
      // Odometer over the product of per-axis ranges, axis 0 slowest.
      std::vector<std::size_t> ri(n, 0);
      for (std::size_t j = 0; j < n; ++j) idx[j] = axes[j][0].first;
      while (true) {
        std::uint64_t flat = 0;
        for (std::size_t j = 0; j < n; ++j) flat = flat * count[j] + static_cast<std::uint64_t>(idx[j]);
        atomic_min(cover[flat], tier);
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
  });

  std::vector<std::uint64_t> hist(tiers + 1, 0);
  for (auto c : cover) hist[c == kUncovered ? tiers : std::min<std::size_t>(c, tiers)]++;
  std::vector<std::uint64_t> out(tiers, 0);
  std::uint64_t run = 0;
  for (std::size_t t = 0; t < tiers; ++t) out[t] = run += hist[t];
  return out;
}

std::vector<std::uint64_t> monte_carlo_cover(const RectSet& rects, std::size_t tiers, const Domain& dom,
                                             std::uint64_t samples, std::uint64_t seed, const Exec& exec) {
  const std::size_t n = rects.n;
  if (samples == 0) throw UsageError("Monte Carlo needs at least one sample");
  // Bucket grid over the domain.
  const double target = std::clamp<double>(4.0 * static_cast<double>(rects.size()), 64.0, 1048576.0);
  const auto g = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(std::pow(target, 1.0 / n))));
  std::uint64_t nb = 1;
  for (std::size_t j = 0; j < n; ++j) nb *= static_cast<std::uint64_t>(g);
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = dom.span[j] / static_cast<double>(g);

  std::uint16_t global = kUncovered;
  std::vector<std::uint16_t> full(nb, kUncovered);
  std::vector<std::vector<std::uint32_t>> partial(nb);
  std::vector<std::vector<BucketHit>> axes(n);
  for (std::size_t k = 0; k < rects.size(); ++k) {
    bool whole = true;
    for (std::size_t j = 0; j < n; ++j) whole = whole && rects.r(k)[j] > 0.5;
    if (whole) {
      global = std::min(global, rects.tier[k]);
      continue;
    }
    bool empty = false;
    for (std::size_t j = 0; j < n && !empty; ++j) {
      axis_buckets(rects.c(k)[j], rects.r(k)[j], dom.origin[j], w[j], g, axes[j]);
      empty = axes[j].empty();
    }
    if (empty) continue;
    std::vector<std::size_t> ri(n, 0);
    while (true) {
      std::uint64_t flat = 0;
      bool all_full = true;
      for (std::size_t j = 0; j < n; ++j) {
        flat = flat * static_cast<std::uint64_t>(g) + static_cast<std::uint64_t>(axes[j][ri[j]].k);
        all_full = all_full && axes[j][ri[j]].full;
      }
      if (all_full) {
        full[flat] = std::min(full[flat], rects.tier[k]);
      } else {
        partial[flat].push_back(static_cast<std::uint32_t>(k));
      }
      bool more = false;
      for (std::size_t j = n; j-- > 0;) {
        if (++ri[j] < axes[j].size()) {
          more = true;
          break;
        }
        ri[j] = 0;
      }
      if (!more) break;
    }
  }

  const std::uint64_t blocks = (samples + kBlock - 1) / kBlock;
  std::vector<std::vector<std::uint64_t>> hist(blocks, std::vector<std::uint64_t>(tiers + 1, 0));
  parallel_for(blocks, exec.workers, [&](std::size_t b) {
    std::mt19937_64 rng(derive_seed(seed, b));
    const std::uint64_t todo = std::min<std::uint64_t>(kBlock, samples - b * kBlock);
    std::vector<double> x(n);
    for (std::uint64_t s = 0; s < todo; ++s) {
      std::uint64_t flat = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const double u = uniform01(rng);
        x[j] = dom.origin[j] + u * dom.span[j];
        const auto bk = std::min<std::int64_t>(g - 1, static_cast<std::int64_t>(u * static_cast<double>(g)));
        flat = flat * static_cast<std::uint64_t>(g) + static_cast<std::uint64_t>(bk);
      }
      std::uint16_t best = std::min(global, full[flat]);
      for (std::uint32_t id : partial[flat]) {
        if (rects.tier[id] < best && rect_has(rects, id, x.data())) best = rects.tier[id];
      }
      hist[b][best == kUncovered ? tiers : std::min<std::size_t>(best, tiers)]++;
    }
  });
  std::vector<std::uint64_t> out(tiers, 0);
  std::uint64_t run = 0;
  for (std::size_t t = 0; t < tiers; ++t) {
    for (const auto& h : hist) run += h[t];
    out[t] = run;
  }
  return out;
}

long double wilson_half_width(std::uint64_t hits, std::uint64_t trials) {
  if (trials == 0) return 0;
  const long double z = 1.959963984540054L;
  const long double nn = static_cast<long double>(trials);
  const long double p = static_cast<long double>(hits) / nn;
  const long double denom = 1 + z * z / nn;
  return z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
}

}  // namespace twistlab::detail
