#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latstab {

inline constexpr std::uint64_t kChunkSize = 4096;

// Splits [0, n) into fixed chunks, runs `body(begin, end)` -> Acc on each
// chunk over `workers` threads and merges the chunk results in chunk order.
// The merged value is therefore identical for any worker count.
template <class Acc, class Body>
Acc chunked_reduce(std::uint64_t n, int workers, Body&& body) {
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Acc> partial(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::uint64_t begin = c * kChunkSize;
        partial[c] = body(begin, std::min(n, begin + kChunkSize));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const int w = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::uint64_t>(chunks, 1))));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(w);
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  Acc total{};
  for (const auto& p : partial) total.merge(p);
  return total;
}

// Runs independent jobs 0..n-1 on `workers` threads; results land by index.
template <class Result, class Job>
std::vector<Result> parallel_map(std::size_t n, int workers, Job&& job) {
  std::vector<Result> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(n, 1))));
  if (w == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace latstab
