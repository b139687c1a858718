#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "manifit/point_cloud.hpp"

namespace manifit {

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work is handed
/// out one index at a time; each index is processed exactly once, so results
/// written per index do not depend on the worker count. The first exception
/// thrown by any worker is rethrown after all workers join.
template<class Body>
void
parallel_for(Index n, unsigned threads, Body&& body)
{
  if (n <= 0) {
    return;
  }
  const auto workers = static_cast<Index>(std::max(1u, threads));
  if (workers == 1 || n == 1) {
    for (Index i = 0; i < n; ++i) {
      body(i);
    }
    return;
  }

  std::atomic<Index> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (Index i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next = n;
      }
    }
  };

  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(std::min(workers, n)));
  for (Index w = 0; w < std::min(workers, n); ++w) {
    pool.emplace_back(run);
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

} // namespace manifit
