#pragma once

#include <cstddef>
#include <functional>

namespace perc {

// Worker count: PERC_THREADS if set and positive, else hardware concurrency.
int worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Each index
// should write only its own output slot so results do not depend on
// scheduling. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace perc
