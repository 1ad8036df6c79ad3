#pragma once

// Chunked work distribution whose results do not depend on scheduling:
// workers pull chunk indices from a shared counter and write into the slot
// for that chunk, so callers reduce in chunk order.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace pplab {

constexpr std::uint64_t kChunkSize = 4096;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs fn(chunk) for chunk in [0, chunks) on up to `threads` workers and
/// returns the per-chunk results in chunk order. The first exception thrown
/// by any chunk (lowest chunk index) is rethrown.
template <typename Result, typename Fn>
std::vector<Result> run_chunks(std::uint64_t chunks, unsigned threads, Fn&& fn) {
  std::vector<Result> out(chunks);
  std::vector<std::exception_ptr> errors(chunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        out[c] = fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(resolve_threads(threads),
                                                     static_cast<unsigned>(std::min<std::uint64_t>(chunks, 1024))));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

/// Pairwise reduction with a fixed tree shape determined only by the size.
template <typename T, typename Combine>
T tree_reduce(std::vector<T> items, Combine&& combine, T empty) {
  if (items.empty()) return empty;
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(combine(items[i], items[i + 1]));
    if (items.size() % 2) next.push_back(std::move(items.back()));
    items = std::move(next);
  }
  return std::move(items.front());
}

}  // namespace pplab
