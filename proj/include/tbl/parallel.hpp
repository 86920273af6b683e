#pragma once

#include <cstddef>
#include <functional>

namespace tbl {

/// Worker count: TBL_THREADS if set, else hardware concurrency, at least 1.
std::size_t worker_count();

/// Runs fn(i) for i in [0, n) on the worker pool. Callers index into
/// preallocated output slots, so assembly order never depends on scheduling.
/// Exceptions are captured and rethrown (first one wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace tbl
