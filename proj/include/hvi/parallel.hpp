#pragma once

/// \file
/// Fixed-size worker pool over an index range; results keep input order.

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace hvi {

inline unsigned default_jobs() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, n) on up to `jobs` threads. The exception
/// from the lowest failing index is rethrown after all workers finish.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t n, unsigned jobs, Fn&& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = static_cast<unsigned>(
      std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace hvi
