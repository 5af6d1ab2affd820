#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace omptk {

/// Resolves a worker count: explicit request wins, then the OMPTK_THREADS
/// environment variable, then hardware concurrency.
int resolve_thread_count(int requested);

/// Runs body(begin, end) over [0, count) split into fixed-size chunks that
/// worker threads pull from a shared cursor. The chunk layout depends only on
/// count and chunk_size, so reductions keyed by item or chunk index are
/// deterministic for any worker count.
template <class Body>
void parallel_chunks(std::int64_t count, int threads, std::int64_t chunk_size,
                     Body&& body) {
  if (count <= 0) return;
  if (chunk_size <= 0) chunk_size = 1;
  const int workers = resolve_thread_count(threads);
  if (workers <= 1 || count <= chunk_size) {
    for (std::int64_t b = 0; b < count; b += chunk_size)
      body(b, std::min(b + chunk_size, count));
    return;
  }
  std::atomic<std::int64_t> cursor{0};
  auto work = [&] {
    for (;;) {
      const std::int64_t b = cursor.fetch_add(chunk_size);
      if (b >= count) return;
      body(b, std::min(b + chunk_size, count));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int i = 1; i < workers; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace omptk
