#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fgsi {

/// Worker count to use for a request of `requested` (0 = all cores).
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Indices are
/// handed out dynamically; fn must write only to slot i of any shared
/// output. The first exception thrown by fn is rethrown after all workers
/// have stopped.
template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t width =
      std::min<std::size_t>(count, static_cast<std::size_t>(resolve_workers(workers)));
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(width);
    for (std::size_t w = 0; w < width; ++w) {
      pool.emplace_back([&] {
        while (!stop.load(std::memory_order_relaxed)) {
          const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
          if (i >= count) break;
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            stop = true;
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace fgsi
