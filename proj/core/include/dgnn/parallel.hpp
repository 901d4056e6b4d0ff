#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace dgnn {

/// Worker count from DGNN_THREADS (default 1).
int num_threads();
/// Override the worker count for the current process (0 restores the default).
void set_num_threads(int n);

/// Runs f(worker, begin, end) over contiguous chunks of [0, n). Chunk
/// boundaries depend only on n and the worker count, so per-worker partial
/// results merged in worker order are reproducible.
template <class F>
void parallel_chunks(int n, int workers, F&& f) {
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    f(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) {
    const int b = static_cast<int>(static_cast<long>(n) * w / workers);
    const int e = static_cast<int>(static_cast<long>(n) * (w + 1) / workers);
    pool.emplace_back([&f, w, b, e] { f(w, b, e); });
  }
  f(0, 0, static_cast<int>(static_cast<long>(n) / workers));
  for (auto& t : pool) t.join();
}

}  // namespace dgnn
