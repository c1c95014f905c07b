#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace logshift {

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
// concurrency). Exceptions are rethrown for the smallest failing index, so
// error behavior does not depend on scheduling.
inline void parallel_for(int count, int threads,
                         const std::function<void(int)>& fn) {
  if (threads == 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads == 0) threads = 1;
  }
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  const int workers = std::min(threads, count);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (int i = 0; i < count; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
}

}  // namespace logshift
