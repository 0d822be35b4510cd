#pragma once

#include <functional>

namespace lrf {

/// Caps the worker threads used by the parallel helpers (default: hardware).
void set_max_workers(int workers);
int max_workers();

/// Splits [0, items) into a fixed number of chunks, evaluates chunk_fn(lo, hi)
/// possibly concurrently, and adds the partial results in chunk order. The
/// chunk layout is independent of the worker count, so results are bit-stable
/// across schedules.
double parallel_chunk_sum(long items, const std::function<double(long, long)>& chunk_fn,
                          int chunks = 256);

/// Runs fn(i) for i in [0, count); each index must write only its own slots.
void parallel_for(long count, const std::function<void(long)>& fn);

}  // namespace lrf
