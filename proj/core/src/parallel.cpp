#include "lrf/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace lrf {

namespace {
std::atomic<int> g_max_workers{0};  // 0 = hardware concurrency
}

void set_max_workers(int workers) { g_max_workers.store(workers > 0 ? workers : 0); }

int max_workers() {
  const int w = g_max_workers.load();
  if (w > 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double parallel_chunk_sum(long items, const std::function<double(long, long)>& chunk_fn,
                          int chunks) {
  if (items <= 0) return 0.0;
  if (chunks > items) chunks = static_cast<int>(items);
  const int workers = std::min(max_workers(), chunks);
  std::vector<double> partial(chunks, 0.0);
  const long per = (items + chunks - 1) / chunks;

  if (workers <= 1) {
    for (int c = 0; c < chunks; ++c) {
      const long lo = c * per;
      const long hi = std::min(items, lo + per);
      if (lo < hi) partial[c] = chunk_fn(lo, hi);
    }
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int c = next.fetch_add(1);
        if (c >= chunks) return;
        const long lo = c * per;
        const long hi = std::min(items, lo + per);
        if (lo < hi) partial[c] = chunk_fn(lo, hi);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

void parallel_for(long count, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  const int workers = static_cast<int>(std::min<long>(max_workers(), count));
  if (workers <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace lrf
