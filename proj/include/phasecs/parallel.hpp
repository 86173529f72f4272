#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace phasecs {

// Static chunked parallel loop. Workers write only to per-index slots owned by
// the caller; any reduction happens sequentially afterwards, so results never
// depend on the thread count or schedule.
template <typename Fn>
void parallel_for(std::size_t total, int threads, Fn&& fn) {
  if (threads <= 1 || total < 2) {
    for (std::size_t i = 0; i < total; ++i) fn(i);
    return;
  }
  std::size_t workers = static_cast<std::size_t>(threads);
  if (workers > total) workers = total;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (total + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = w * chunk;
    std::size_t hi = lo + chunk < total ? lo + chunk : total;
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace phasecs
