#pragma once

// Deterministic chunked parallel-for.
//
// Work is split into fixed-size chunks whose boundaries do not depend on the
// worker count. Each chunk writes into its own slot, and callers reduce the
// slots in chunk order, so results are byte-identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace cherlb::par {

inline unsigned default_threads() {
  if (const char* env = std::getenv("CHERLB_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

inline constexpr std::uint64_t kChunk = 1u << 16;

// fn(chunk_index, begin, end) must only touch state owned by chunk_index.
template <class Fn>
void for_chunks(std::uint64_t n, Fn&& fn, unsigned threads = 0) {
  if (n == 0) return;
  if (threads == 0) threads = default_threads();
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  if (threads == 1 || chunks == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c)
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    return;
  }
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
    }
  };
  std::vector<std::thread> pool;
  const unsigned use = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  pool.reserve(use);
  for (unsigned t = 0; t < use; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

// Per-chunk partial sums reduced in chunk order.
template <class Fn>
double sum_over(std::uint64_t n, Fn&& per_index, unsigned threads = 0) {
  const std::uint64_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  for_chunks(
      n,
      [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        double acc = 0.0;
        for (std::uint64_t i = b; i < e; ++i) acc += per_index(i);
        partial[c] = acc;
      },
      threads);
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

}  // namespace cherlb::par
