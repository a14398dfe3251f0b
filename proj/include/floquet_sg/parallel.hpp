#pragma once

#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace floquet_sg {

/// Run f(i) for i in [0, n) across a thread pool.  Results must be written
/// by index by the caller, so the outcome is independent of scheduling.
/// The first exception thrown by any invocation is rethrown after join.
template <class F>
void parallel_for(int n, const F& f, int threads = 0) {
  if (n <= 0) return;
  int nt = threads > 0 ? threads
                       : static_cast<int>(std::thread::hardware_concurrency());
  nt = std::max(1, std::min(nt, n));
  if (nt == 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += nt) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace floquet_sg
