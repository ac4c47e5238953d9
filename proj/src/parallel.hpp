#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pdifmp::detail {

inline unsigned worker_count(unsigned requested, std::size_t n) {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned workers = requested == 0 ? hw : requested;
  if (n < workers) workers = static_cast<unsigned>(std::max<std::size_t>(n, 1));
  return workers;
}

/// Calls body(i) for i in [0, n) over contiguous chunks. Each index is
/// handled by exactly one worker, so writes to slot i need no locking.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = worker_count(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = n * w / workers;
      const std::size_t end = n * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pdifmp::detail
