#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace levyfluct {

/// Worker count from LEVYFLUCT_WORKERS, else the hardware concurrency.
int default_worker_count();

/// Runs fn(index, worker) for index in [0, n) on `workers` threads. Work is
/// handed out in chunks; callers must write results by index so the outcome
/// does not depend on scheduling.
template <class Fn>
void parallel_for(std::uint64_t n, int workers, Fn&& fn) {
  workers = std::max(1, workers);
  if (workers == 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i, 0);
    return;
  }
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&](int worker) {
    try {
      for (;;) {
        const std::uint64_t start = next.fetch_add(kChunk);
        if (start >= n) break;
        const std::uint64_t stop = std::min(n, start + kChunk);
        for (std::uint64_t i = start; i < stop; ++i) fn(i, worker);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next.store(n);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(body, w);
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace levyfluct
