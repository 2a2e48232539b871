#pragma once

#include <cstdint>
#include <functional>

namespace snds {

// Worker count: SNDS_THREADS if set (>0), else hardware concurrency.
int worker_threads();

// Runs fn(i) for i in [begin, end) on worker_threads() threads. Work items
// must be independent; the first exception thrown by any worker is rethrown
// on the calling thread after all workers join.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

}  // namespace snds
