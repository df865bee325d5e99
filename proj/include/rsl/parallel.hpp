#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rsl {

inline unsigned defaultJobs() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// Fixed number of work chunks regardless of thread count, so per-chunk
// substream seeding and in-order merging give bitwise-identical results at
// any --jobs value.
inline constexpr unsigned kFixedChunks = 64;

// Runs body(chunk_index, begin, end) for a fixed partition of [0, n) into
// `chunks` pieces, on up to `jobs` threads. The caller merges per-chunk
// results in index order.
template <class Body>
void forEachChunk(std::uint64_t n, unsigned chunks, unsigned jobs, Body&& body) {
  if (chunks == 0) chunks = 1;
  if (jobs <= 1 || chunks == 1) {
    for (unsigned c = 0; c < chunks; ++c) {
      const std::uint64_t b = n * c / chunks, e = n * (c + 1) / chunks;
      body(c, b, e);
    }
    return;
  }
  std::atomic<unsigned> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const unsigned c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const std::uint64_t b = n * c / chunks, e = n * (c + 1) / chunks;
        body(c, b, e);
      } catch (...) {
        std::lock_guard<std::mutex> lk(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned nthreads = jobs < chunks ? jobs : chunks;
  pool.reserve(nthreads);
  for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rsl
