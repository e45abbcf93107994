#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace psm {

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(i) for i in [0, n). Work items must be independent; each writes
// only its own output slot, so results are identical for every worker count.
// If several items throw, the one with the lowest index is rethrown.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
  workers = resolve_workers(workers);
  if (n <= 0) return;
  if (workers == 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr first_err;
  int first_err_index = n;

  auto body = [&]() {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (i < first_err_index) {
          first_err_index = i;
          first_err = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> threads;
  const int nthreads = std::min(workers, n);
  threads.reserve(static_cast<size_t>(nthreads));
  for (int t = 0; t < nthreads; ++t) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (first_err) std::rethrow_exception(first_err);
}

}  // namespace psm
