#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace genrank {

/// Runs fn(i) for i in [0, count) on up to `threads` workers
/// (0 = hardware concurrency). Work items must be independent; the caller
/// is responsible for writing results to disjoint slots. The first
/// exception thrown by any item is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), count);

  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace genrank
