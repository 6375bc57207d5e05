#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace film {

// Worker count: hardware concurrency, capped by FILM_BOUNDS_THREADS and by
// set_worker_limit (0 removes the programmatic cap).
unsigned worker_count();
void set_worker_limit(unsigned n);

namespace detail {
inline bool& inside_worker()
{
  thread_local bool flag = false;
  return flag;
}
}  // namespace detail

// Runs body(k) for k in [0, n) on contiguous blocks; calls made from inside a
// worker run serially.  Work items must write
// to disjoint slots; results therefore do not depend on the worker count.
template <typename F>
void parallel_for(std::ptrdiff_t n, F&& body)
{
  const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(worker_count()), n);
  if (workers <= 1 || detail::inside_worker()) {
    for (std::ptrdiff_t k = 0; k < n; ++k)
      body(k);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      detail::inside_worker() = true;
      const std::ptrdiff_t begin = n * t / workers, end = n * (t + 1) / workers;
      try {
        for (std::ptrdiff_t k = begin; k < end; ++k)
          body(k);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool)
    th.join();
  for (auto& e : errors)
    if (e)
      std::rethrow_exception(e);
}

}  // namespace film
