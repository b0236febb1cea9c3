#pragma once

#include <cstddef>
#include <functional>

namespace cohomlab {

/// Worker count from COHOMLAB_THREADS, else hardware concurrency.
int thread_count();

/// Runs fn(i) for i in [0, n) on the worker pool. Callers write results into
/// per-index slots so that aggregation order never depends on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace cohomlab
