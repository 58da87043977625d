#pragma once

#include <cstddef>
#include <functional>

namespace liouville {

// Worker count: hardware concurrency, capped by LIOUVILLE_THREADS when set.
std::size_t worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Exceptions
// escaping body are rethrown (first one wins) after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace liouville
