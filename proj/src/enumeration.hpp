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

// Coordinate-box scanning in centered lexicographic order.
//
// Each coordinate j runs over 0, 1, -1, 2, -2, ..., b_j, -b_j and the first
// coordinate is outermost. A box is cut into chunks along the outermost
// coordinate; chunk boundaries depend only on the box, never on the worker
// count, so reductions merged in chunk order are reproducible.

#ifndef TWISTLAB_SRC_ENUMERATION_HPP
#define TWISTLAB_SRC_ENUMERATION_HPP

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "parallel.hpp"
#include "twistlab/errors.hpp"
#include "twistlab/exec.hpp"

namespace twistlab::detail {

inline constexpr std::size_t kMaxChunks = 64;

inline std::int64_t centered_value(std::uint64_t k) {
  if (k == 0) return 0;
  return (k & 1) ? static_cast<std::int64_t>((k + 1) / 2) : -static_cast<std::int64_t>(k / 2);
}

class CenteredBox {
 public:
  explicit CenteredBox(std::vector<std::int64_t> bounds) : bounds_(std::move(bounds)) {}

  std::size_t dim() const { return bounds_.size(); }
  const std::vector<std::int64_t>& bounds() const { return bounds_; }
  std::uint64_t extent(std::size_t j) const { return 2 * static_cast<std::uint64_t>(bounds_[j]) + 1; }

  // Number of lattice points, saturating at UINT64_MAX.
  std::uint64_t size() const {
    unsigned __int128 s = 1;
    for (std::size_t j = 0; j < dim(); ++j) {
      s *= extent(j);
      if (s > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(s);
  }

  void check_budget(std::uint64_t budget, const std::string& what) const {
    if (size() <= budget) return;
    std::string b;
    for (std::size_t j = 0; j < dim(); ++j) {
      if (j) b += ", ";
      b += "|q_" + std::to_string(j + 1) + "| <= " + std::to_string(bounds_[j]);
    }
    throw ResourceError(what + ": coordinate box {" + b + "} has " +
                        (size() == UINT64_MAX ? std::string("> 2^64") : std::to_string(size())) +
                        " points, over the budget of " + std::to_string(budget));
  }

  // Visits points with outermost index in [outer_begin, outer_end). The
  // visitor gets (q, rank) and returns false to stop early; scan returns
  // false iff stopped.
  template <class Visit>
  bool scan(std::uint64_t outer_begin, std::uint64_t outer_end, Visit&& visit) const {
    const std::size_t d = dim();
    std::vector<std::uint64_t> idx(d, 0);
    std::vector<std::int64_t> q(d, 0);
    std::uint64_t inner = 1;
    for (std::size_t j = 1; j < d; ++j) inner *= extent(j);
    for (std::uint64_t o = outer_begin; o < outer_end; ++o) {
      idx[0] = o;
      q[0] = centered_value(o);
      for (std::size_t j = 1; j < d; ++j) {
        idx[j] = 0;
        q[j] = 0;
      }
      std::uint64_t rank = o * inner;
      while (true) {
        if (!visit(std::span<const std::int64_t>(q), rank)) return false;
        ++rank;
        bool wrapped = true;
        for (std::size_t j = d - 1; j >= 1; --j) {
          if (++idx[j] < extent(j)) {
            q[j] = centered_value(idx[j]);
            wrapped = false;
            break;
          }
          idx[j] = 0;
          q[j] = 0;
        }
        if (wrapped) break;
      }
    }
    return true;
  }

  std::vector<std::pair<std::size_t, std::size_t>> chunks() const {
    return split_range(static_cast<std::size_t>(extent(0)), kMaxChunks);
  }

  // In-box test.
  bool contains(std::span<const std::int64_t> q) const {
    for (std::size_t j = 0; j < dim(); ++j) {
      if (q[j] > bounds_[j] || q[j] < -bounds_[j]) return false;
    }
    return true;
  }

 private:
  std::vector<std::int64_t> bounds_;
};

inline bool is_zero(std::span<const std::int64_t> q) {
  for (auto x : q) {
    if (x != 0) return false;
  }
  return true;
}

// Chunked reduction: one accumulator per chunk, merged in chunk order.
template <class Acc, class MakeAcc, class Visit>
std::vector<Acc> scan_chunks(const CenteredBox& box, const Exec& exec, MakeAcc make_acc, Visit visit) {
  auto ranges = box.chunks();
  std::vector<Acc> accs;
  accs.reserve(ranges.size());
  for (std::size_t c = 0; c < ranges.size(); ++c) accs.push_back(make_acc());
  parallel_for(ranges.size(), exec.workers, [&](std::size_t c) {
    Acc& acc = accs[c];
    box.scan(ranges[c].first, ranges[c].second,
             [&](std::span<const std::int64_t> q, std::uint64_t rank) { return visit(acc, q, rank); });
  });
  return accs;
}

// First point (in enumeration order) accepted by `test`. Chunks after one
// that already found a hit are abandoned.
template <class Result, class Test>
std::optional<Result> find_first(const CenteredBox& box, const Exec& exec, Test test) {
  auto ranges = box.chunks();
  std::vector<std::optional<Result>> found(ranges.size());
  std::atomic<std::size_t> best{ranges.size()};
  parallel_for(ranges.size(), exec.workers, [&](std::size_t c) {
    if (c > best.load()) return;
    box.scan(ranges[c].first, ranges[c].second, [&](std::span<const std::int64_t> q, std::uint64_t) {
      if (c > best.load(std::memory_order_relaxed)) return false;
      if (auto r = test(q)) {
        found[c] = std::move(r);
        std::size_t cur = best.load();
        while (c < cur && !best.compare_exchange_weak(cur, c)) {
        }
        return false;
      }
      return true;
    });
  });
  for (auto& f : found) {
    if (f) return f;
  }
  return std::nullopt;
}

}  // namespace twistlab::detail

#endif  // TWISTLAB_SRC_ENUMERATION_HPP
