#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace maxent {

/// Runs body(begin, end) over a partition of [0, n). The body must write
/// only to per-index slots, so the result does not depend on the partition
/// and threads only changes wall time. The first exception (by lowest range
/// start) is rethrown.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t, std::int64_t)>& body) {
  if (n <= 0) return;
  const int workers =
      std::max(1, std::min<std::int64_t>(threads, n));
  if (workers == 1) {
    body(0, n);
    return;
  }

  std::mutex mu;
  std::int64_t first_failure = -1;
  std::exception_ptr error;

  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::int64_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = static_cast<std::int64_t>(w) * chunk;
    const std::int64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (first_failure < 0 || begin < first_failure) {
          first_failure = begin;
          error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace maxent
