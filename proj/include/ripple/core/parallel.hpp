#pragma once

#include <cstddef>
#include <functional>

namespace ripple {

// Worker cap: RIPPLE_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_limit();

// Runs task(0) ... task(n-1) on up to worker_limit() threads and rethrows the
// first exception (lowest index) after all tasks finish. Tasks must not share
// mutable state.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task);

}  // namespace ripple
