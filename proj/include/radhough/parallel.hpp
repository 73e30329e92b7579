#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace radhough {

/// Resolves a user thread count; 0 means "all hardware threads".
inline unsigned resolve_threads(unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return threads;
}

/// Splits [0, count) into at most `threads` contiguous chunks and runs
/// fn(chunk, begin, end) on each. Chunk boundaries depend only on (count,
/// threads), so callers that merge per-chunk results in chunk order are
/// deterministic for a fixed thread count.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
  threads = resolve_threads(threads);
  const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (chunks == 1) {
    fn(std::size_t{0}, std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    workers.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
  for (auto& w : workers) w.join();
}

/// fn(i) for every i in [0, count); iterations must write disjoint data.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  parallel_chunks(count, threads, [&fn](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

}  // namespace radhough
