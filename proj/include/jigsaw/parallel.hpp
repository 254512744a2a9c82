#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace jigsaw {

/// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned workers) {
  if (workers != 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, count) and returns the results in index
/// order. Worker w handles indices w, w + W, w + 2W, ..., so the output never
/// depends on the worker count as long as fn(i) depends only on i. The first
/// exception thrown (lowest index) is rethrown after all workers finish.
template <class Fn>
auto parallel_map(std::size_t count, unsigned workers, Fn fn) -> std::vector<decltype(fn(0))> {
  using T = decltype(fn(0));
  static_assert(!std::is_same_v<T, bool>, "std::vector<bool> slots are not independent");
  std::vector<T> out(count);
  const std::size_t w = std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1));
  if (w <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::mutex mu;
  std::exception_ptr error;
  std::size_t error_index = count;
  auto body = [&](std::size_t worker) {
    for (std::size_t i = worker; i < count; i += w) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(w - 1);
  for (std::size_t k = 1; k < w; ++k) pool.emplace_back(body, k);
  body(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace jigsaw
