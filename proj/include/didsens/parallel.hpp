#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace didsens {

// Worker count: hardware concurrency, capped by DID_SENS_THREADS and by
// set_thread_limit(). Always at least 1.
std::size_t max_threads();
void set_thread_limit(std::size_t n);  // 0 removes the limit

// Calls fn(i) for i in [0, n). Each index is handled exactly once; the
// first exception thrown by any worker is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace didsens
