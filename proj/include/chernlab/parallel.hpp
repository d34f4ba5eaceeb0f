#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace chernlab {

/// Resolves a requested worker count: 0 means "use the hardware", anything
/// else is clamped to [1, 64].
inline int resolve_thread_count(int requested) {
  if (requested <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    requested = hw == 0 ? 1 : static_cast<int>(hw);
  }
  return std::clamp(requested, 1, 64);
}

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
/// processed exactly once and the body must only write to its own slot of a
/// preallocated result buffer, so the outcome is bit-identical to a serial
/// loop regardless of scheduling. The first exception thrown by any worker is
/// rethrown after all workers join.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  threads = resolve_thread_count(threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = std::min(count, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace chernlab
