#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace spinon {

/// Evaluate fn(i) for i in [0, count) on `threads` workers. Results are
/// stored by index, so the output does not depend on scheduling. The first
/// exception thrown by any task is rethrown after all workers join.
template <class T, class Fn> std::vector<T> parallel_map(std::size_t count, int threads, Fn &&fn) {
  std::vector<T> out(count);
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i)
      out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count)
        return;
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::min(workers, count));
  for (std::size_t w = 0; w < std::min(workers, count); ++w)
    pool.emplace_back(work);
  pool.clear();
  if (failure)
    std::rethrow_exception(failure);
  return out;
}

} // namespace spinon
