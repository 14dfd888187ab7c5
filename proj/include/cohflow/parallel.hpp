#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cohflow {

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("COHFLOW_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs body(lo, hi) over a contiguous block decomposition of [0, count).
// Each index is visited exactly once; the result must not depend on which
// thread handles which block.
inline void parallel_for(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& body,
                         unsigned threads = 0) {
  if (threads == 0) threads = default_thread_count();
  if (threads <= 1 || count < 2 * static_cast<std::size_t>(threads)) {
    body(0, count);
    return;
  }
  std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    std::size_t lo = static_cast<std::size_t>(t) * chunk;
    if (lo >= count) break;
    std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back(body, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace cohflow
