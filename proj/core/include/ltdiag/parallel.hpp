#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ltdiag {

// Number of fixed work chunks used by every reduction. The partition of an
// index range never depends on the thread count, so sums are bit-identical
// whether one or many threads run them.
inline constexpr std::size_t kReductionChunks = 64;

inline unsigned worker_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return std::max(1u, std::min(hw, 16u));
}

namespace detail {

// Runs body(i) for i in [0, n) on a strided thread pool and rethrows the
// first exception on the calling thread.
template <typename Body>
void strided_run(std::size_t n, Body&& body) {
  const unsigned workers = worker_count();
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

// Sums fn(begin, end) over a fixed partition of [0, n) and combines the
// partial results in chunk order.
template <typename Fn>
double chunked_sum(std::size_t n, Fn&& fn) {
  if (n == 0) return 0.0;
  const std::size_t chunks = std::min(n, kReductionChunks);
  std::vector<double> partial(chunks, 0.0);
  detail::strided_run(chunks, [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    partial[c] = fn(begin, end);
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Runs fn(i) for every i in [0, n); fn must only write to slot i of its output.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  detail::strided_run(n, fn);
}

}  // namespace ltdiag
