#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ift {

/// Worker count: `requested` if nonzero, else IFT_THREADS, else hardware.
inline unsigned worker_count(unsigned requested = 0) {
  if (requested != 0) return requested;
  if (const char* env = std::getenv("IFT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Set on worker threads; nested parallel_map calls then run inline.
inline thread_local bool in_parallel_worker = false;

/// results[i] = fn(i) for i in [0, count). Output order never depends on
/// scheduling; the first exception thrown by any task is rethrown.
template <class R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn,
                            unsigned threads = 0) {
  std::vector<R> results(count);
  unsigned workers = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(count, 1));
  if (workers <= 1 || in_parallel_worker) {
    for (std::size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  auto work = [&] {
    in_parallel_worker = true;
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= count || error) return;
        i = next++;
      }
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace ift
