#pragma once
// Chunked parallel map with deterministic result placement.

#include <functional>
#include <thread>
#include <vector>

#include "ellsurf/config.hpp"

namespace ellsurf {

template <class Fn>
void parallel_for(size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 64) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<size_t> next{0};
  size_t chunk = std::max<size_t>(1, n / (workers * 8));
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        size_t lo = next.fetch_add(chunk);
        if (lo >= n) break;
        size_t hi = std::min(n, lo + chunk);
        for (size_t i = lo; i < hi; ++i) fn(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ellsurf
