#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace steinlab {

/// 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls body(rep, worker) for every rep in [0, reps).  Workers claim
/// replicates from a shared counter, so the assignment of replicates to
/// workers varies between runs; bodies must store results by `rep` and the
/// caller reduces them in replicate order.  The first exception thrown by a
/// body is rethrown here after all workers stop.
template <class Body>
void for_each_replicate(std::size_t reps, unsigned threads, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(reps, 1)));
  if (workers <= 1) {
    for (std::size_t r = 0; r < reps; ++r) body(r, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&](unsigned worker) {
    for (;;) {
      const std::size_t r = next.fetch_add(1);
      if (r >= reps || failed.load()) return;
      try {
        body(r, worker);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace steinlab
