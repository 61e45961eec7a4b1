#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace relp::detail {

// Statically partitioned index-parallel loop. Each index runs exactly once
// and callers may only write to per-index slots, so results never depend on
// the thread count. fn must not throw.
template <typename Fn>
inline void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&fn, begin, end] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace relp::detail
