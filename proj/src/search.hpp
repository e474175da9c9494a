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

#ifndef TWISTLAB_SRC_SEARCH_HPP
#define TWISTLAB_SRC_SEARCH_HPP

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "enumeration.hpp"
#include "twistlab/core.hpp"

namespace twistlab::detail {

struct SearchOutcome {
  bool found = false;  // a point passed definitely
  bool maybe = false;  // some point passed up to the kEta band
  std::vector<std::int64_t> q;
  std::uint64_t indeterminate = 0;
  bool truncated = false;  // stopped at rank_limit without a hit
};

// First point in enumeration order for which test(q, indet) is True.
// Chunks before the first hit are scanned in full and the hit chunk up to the
// hit, so `maybe` and `indeterminate` are schedule independent. Only ranks
// below rank_limit are visited.
template <class Test>
SearchOutcome first_solution(const CenteredBox& box, const Exec& exec, Test test,
                             std::uint64_t rank_limit = UINT64_MAX) {
  struct Acc {
    bool found = false;
    bool maybe = false;
    std::vector<std::int64_t> q;
    std::uint64_t indet = 0;
  };
  auto ranges = box.chunks();
  std::vector<Acc> accs(ranges.size());
  std::atomic<std::size_t> first{ranges.size()};
  parallel_for(ranges.size(), exec.workers, [&](std::size_t c) {
    if (c > first.load()) return;
    Acc& acc = accs[c];
    box.scan(ranges[c].first, ranges[c].second, [&](std::span<const std::int64_t> q, std::uint64_t rank) {
      if (rank >= rank_limit || c > first.load(std::memory_order_relaxed)) return false;
      const Truth r = test(q, acc.indet);
      if (r == Truth::True) {
        acc.found = true;
        acc.q.assign(q.begin(), q.end());
        std::size_t cur = first.load();
        while (c < cur && !first.compare_exchange_weak(cur, c)) {
        }
        return false;
      }
      if (r == Truth::Indeterminate) acc.maybe = true;
      return true;
    });
  });
  SearchOutcome out;
  for (auto& acc : accs) {
    out.indeterminate += acc.indet;
    out.maybe = out.maybe || acc.maybe;
    if (acc.found) {
      out.found = true;
      out.q = std::move(acc.q);
      break;
    }
  }
  out.truncated = !out.found && box.size() > rank_limit;
  return out;
}

// Every residual within its threshold; strict or inclusive.
inline Truth rows_within(const std::vector<RowForm>& rows, const std::vector<Threshold>& t,
                         std::span<const std::int64_t> q, bool inclusive, std::uint64_t& indet) {
  Truth all = Truth::True;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Residual r = rows[i].residual(q);
    const Truth c = inclusive ? abs_less_equal(r, t[i]) : abs_less(r, t[i]);
    if (c == Truth::Indeterminate) ++indet;
    all = all && c;
    if (all == Truth::False) return all;
  }
  return all;
}

}  // namespace twistlab::detail

#endif  // TWISTLAB_SRC_SEARCH_HPP
