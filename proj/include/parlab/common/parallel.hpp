#pragma once

#include <cstddef>
#include <functional>

namespace parlab {

// Worker count from LAB_THREADS (default: hardware concurrency, at least 1).
std::size_t lab_threads();

// Runs body(i) for i in [0, count) over up to `threads` workers. Each index
// runs exactly once; callers write results into per-index slots so the merge
// order never depends on scheduling. Exceptions are rethrown on the caller.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::size_t threads = lab_threads());

}  // namespace parlab
