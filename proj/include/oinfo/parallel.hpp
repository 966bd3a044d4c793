#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace oinfo {

/// Called after each finished task with (completed, total). May be invoked
/// concurrently from several workers.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

struct Execution {
  std::size_t workers = 1;
  ProgressFn progress;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Tasks are claimed
/// from a shared counter, so results must be written by index. If tasks
/// throw, the exception of the lowest failing index is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, const Execution& exec, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex error_mutex;
  std::size_t error_index = n;
  std::exception_ptr error;

  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
      const std::size_t completed = done.fetch_add(1) + 1;
      if (exec.progress) exec.progress(completed, n);
    }
  };

  const std::size_t threads = std::clamp<std::size_t>(exec.workers, 1, std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace oinfo
