#if !defined(ELENE_DETAIL_PARALLEL_HPP)
#define ELENE_DETAIL_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

#include "elene/error.hpp"

namespace elene::detail {

inline int clamp_threads(int threads, std::int64_t work) {
  if (threads < 1) raise(errc::invalid_params, "threads must be >= 1");
  return static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(work, 1)));
}

// Runs fn(worker_index, begin, end) over contiguous chunks of [0, count).
// Chunk boundaries depend only on (count, threads), so outputs written into
// per-index slots are identical for every thread count.
template <typename Fn>
void parallel_chunks(std::int64_t count, int threads, Fn&& fn) {
  int t = clamp_threads(threads, count);
  if (t == 1) {
    fn(0, std::int64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  std::exception_ptr failure;
  std::atomic_flag claimed = ATOMIC_FLAG_INIT;
  std::int64_t chunk = (count + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    std::int64_t lo = w * chunk;
    std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, &failure, &claimed, w, lo, hi] {
      try {
        fn(w, lo, hi);
      } catch (...) {
        if (!claimed.test_and_set()) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace elene::detail

#endif
