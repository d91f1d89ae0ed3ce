#pragma once

#include <cstddef>
#include <functional>

namespace klein {

// Worker count: hardware concurrency, capped by KLEIN_SYSTOLIC_THREADS when set.
unsigned worker_count();

// Runs body(k) for k in [0, n) on up to worker_count() threads. Indices are handed out
// dynamically; the first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace klein
