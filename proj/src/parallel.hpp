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

#ifndef TWISTLAB_SRC_PARALLEL_HPP
#define TWISTLAB_SRC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace twistlab::detail {

// Runs fn(task) for task in [0, tasks) on up to `workers` threads. If tasks
// throw, the exception of the lowest-numbered failing task is rethrown.
template <class Fn>
void parallel_for(std::size_t tasks, unsigned workers, Fn&& fn) {
  if (tasks == 0) return;
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), tasks));
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        fn(t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Splits [0, extent) into at most max_chunks contiguous ranges.
inline std::vector<std::pair<std::size_t, std::size_t>> split_range(std::size_t extent, std::size_t max_chunks) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (extent == 0) return out;
  const std::size_t chunks = std::min(extent, std::max<std::size_t>(1, max_chunks));
  for (std::size_t c = 0; c < chunks; ++c) out.emplace_back(extent * c / chunks, extent * (c + 1) / chunks);
  return out;
}

}  // namespace twistlab::detail

#endif  // TWISTLAB_SRC_PARALLEL_HPP
