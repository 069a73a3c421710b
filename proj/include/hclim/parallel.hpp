#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hclim {

/// Number of worker threads used by parallel_for; 0 means hardware
/// concurrency. Results never depend on this value.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

namespace detail {
inline bool& inside_worker() {
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

/// Runs body(i) for i in [0, count) across worker threads. Each index is
/// processed exactly once; the first exception thrown is rethrown. Nested
/// calls from inside a worker run serially.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers =
      detail::inside_worker() ? 1 : std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      detail::inside_worker() = true;
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace hclim
