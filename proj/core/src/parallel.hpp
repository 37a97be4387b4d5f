#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hawkqk::detail {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// handled exactly once; callers write results by index. The first exception
// thrown by any worker is rethrown after all workers have joined.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  {
    const unsigned count = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < count; ++w) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hawkqk::detail
