#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace towpde {

// Resolve a worker-count request: 0 means "use the hardware".
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Static block partition of [0, count) across at most `threads` workers.
// Each worker writes to disjoint result slots, so the outcome never depends
// on scheduling. Small batches run inline to avoid spawn overhead.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& body) {
  threads = resolve_threads(threads);
  const std::size_t min_grain = 2048;
  if (threads <= 1 || count < 2 * min_grain) {
    body(std::size_t{0}, count);
    return;
  }
  std::size_t nblocks = std::min<std::size_t>(static_cast<std::size_t>(threads),
                                              (count + min_grain - 1) / min_grain);
  std::vector<std::thread> pool;
  pool.reserve(nblocks);
  std::size_t chunk = count / nblocks, rem = count % nblocks, begin = 0;
  for (std::size_t b = 0; b < nblocks; ++b) {
    std::size_t len = chunk + (b < rem ? 1 : 0);
    pool.emplace_back([&body, begin, len] { body(begin, begin + len); });
    begin += len;
  }
  for (auto& t : pool) t.join();
}

// Order-independent summation: fixed pairwise tree over the index range.
inline double pairwise_sum(const double* data, std::size_t count) {
  if (count == 0) return 0.0;
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace towpde
