#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace goldbach_lab::detail {

// Runs body(task) for task in [0, tasks) on `workers` threads pulling tasks
// from a shared counter. Tasks must write disjoint outputs. The first
// exception thrown by any task is rethrown on the caller's thread.
template <class Body>
void parallel_tasks(std::size_t tasks, unsigned workers, Body&& body) {
  if (workers <= 1 || tasks <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto run = [&] {
    for (std::size_t t; (t = next.fetch_add(1, std::memory_order_relaxed)) < tasks;) {
      try {
        body(t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks, std::memory_order_relaxed);
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n_threads = static_cast<unsigned>(
        std::min<std::size_t>(workers, tasks));
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(run);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace goldbach_lab::detail
